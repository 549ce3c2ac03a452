use std::process::{Command, Output};

use serde_json::Value;

fn cpalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpalg")).args(args).output().expect("spawn cpalg")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = cpalg(args);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    assert_eq!(v["schema"], 1);
    (v, out.status.code().unwrap())
}

#[test]
fn fryingpan_dot_has_tail_and_cycle() {
    let out = cpalg(&["fryingpan", "--a", "2", "--k", "8", "--dot"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
    let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(nodes, 10);
    assert_eq!(edges.len(), 10);
    assert!(edges.iter().any(|e| e.trim() == "n9 -> n2;"), "{dot}");
    assert_eq!(dot.matches("shape=circle").count(), 2);
}

#[test]
fn fryingpan_report() {
    let (v, code) = report(&["fryingpan", "--a", "1", "--k", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["size"], 7);
    assert_eq!(v["result"]["generators"], serde_json::json!([1, 5]));
    assert!(v["result"]["semiring_failure"].is_null());
}

#[test]
fn appendix_f_window() {
    let (v, code) = report(&["construct", "appendix-F", "--max", "1023"]);
    assert_eq!(code, 0);
    let cert = &v["result"]["certificate"];
    assert_eq!(cert["divisibility_verified"], true);
    assert_eq!(cert["checks"], 1024 * 1023 / 2);
    assert_eq!(cert["over_linear"], true);
    assert!(v["summary"].as_str().unwrap().contains("f(3) = 12"));
}

#[test]
fn appendix_f_values_on_request() {
    let (v, _) = report(&["construct", "appendix-F", "--max", "8", "--values"]);
    let vals: Vec<String> = v["result"]["table"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string().trim_matches('"').to_string())
        .collect();
    assert_eq!(&vals[..4], ["0", "2", "2", "12"]);
}

#[test]
fn z_lattice_of_residue_class() {
    let (v, code) = report(&["lattice", "--carrier", "Z", "--set", r#"{"k":10,"G":[6]}"#]);
    assert_eq!(code, 0);
    assert!(v["summary"].as_str().unwrap().starts_with("1024 members"));
}

#[test]
fn output_is_deterministic() {
    let args = ["lattice", "--set", r#"{"a":2,"k":3,"F":[0],"R":[1]}"#, "--signature", "+,x", "--kind", "boolean"];
    let a = cpalg(&args);
    let b = cpalg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("cpalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pan.json");
    let args = ["fryingpan", "--a", "3", "--k", "4"];
    let direct = cpalg(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let o = cpalg(&with_out);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    let (_, ok) = report(&["check-cp", "--table", r#"{"domain":"N","lo":0,"hi":3,"values":[1,4,9,16]}"#]);
    assert_eq!(ok, 0);
    let (_, refuted) = report(&["check-cp", "--table", r#"{"domain":"N","lo":0,"hi":3,"values":[0,1,3,4]}"#]);
    assert_eq!(refuted, 1);
    let (bad, input) = report(&["check-cp", "--table", "not json"]);
    assert_eq!(input, 2);
    assert!(bad["error"].is_string());
    let (_, domain) = report(&["padic-extend", "--p", "4", "--n", "2", "--x", "3"]);
    assert_eq!(domain, 2);
    let (_, window) =
        report(&["padic-extend", "--p", "3", "--n", "2", "--x", "5", "--table", r#"{"domain":"N","lo":0,"hi":3,"values":[0,1,2,3]}"#]);
    assert_eq!(window, 2);
    // clap usage errors also exit with 2
    assert_eq!(cpalg(&["lattice"]).status.code(), Some(2));
}

#[test]
fn refutation_witness_replays() {
    let vals = [0i64, 0, 0, 1, 2, 4, 8];
    let table = format!(r#"{{"domain":"Z","lo":-3,"hi":3,"values":{vals:?}}}"#);
    let (v, code) = report(&["check-cp", "--table", &table]);
    assert_eq!(code, 1);
    let w = &v["result"]["witness"];
    assert_eq!(w["kind"], "divisibility");
    let (x, y) = (w["x"].as_i64().unwrap(), w["y"].as_i64().unwrap());
    let (fx, fy) = (w["fx"].as_i64().unwrap(), w["fy"].as_i64().unwrap());
    assert_eq!(fx, vals[(x + 3) as usize]);
    assert_eq!(fy, vals[(y + 3) as usize]);
    assert_ne!((fx - fy).rem_euclid(x - y), 0);
}

#[test]
fn residue_table_refutation_replays() {
    // x ↦ x² + 1 is CP; swapping two residues breaks it
    let mut vals: Vec<u64> = (0..27u64).map(|x| (x * x + 1) % 27).collect();
    let (_, ok) = report(&["check-cp", "--table", &format!(r#"{{"p":3,"n":3,"values":{vals:?}}}"#)]);
    assert_eq!(ok, 0);
    vals.swap(1, 2);
    let (v, code) = report(&["check-cp", "--table", &format!(r#"{{"p":3,"n":3,"values":{vals:?}}}"#)]);
    assert_eq!(code, 1);
    let r = &v["result"];
    let (x, y) = (r["x"].as_u64().unwrap(), r["y"].as_u64().unwrap());
    let (fx, fy) = (vals[x as usize] as i64, vals[y as usize] as i64);
    let d = (x as i64 - y as i64).rem_euclid(27);
    let gap = (fx - fy).rem_euclid(27);
    // the 3-adic valuation of x - y must exceed that of f(x) - f(y)
    let v3 = |mut n: i64| {
        let mut k = 0;
        while n != 0 && n % 3 == 0 {
            n /= 3;
            k += 1;
        }
        if n == 0 { 3 } else { k }
    };
    assert!(v3(d) > v3(gap), "{r}");
}

#[test]
fn monomial_check() {
    let (v, code) = report(&["check-monomial", "--table", r#"{"domain":"Nx","lo":1,"hi":5,"values":[3,12,27,48,75]}"#]);
    assert_eq!(code, 0, "{v}");
    let (_, code) = report(&["check-monomial", "--table", r#"{"domain":"Nx","lo":1,"hi":5,"values":[3,12,27,48,76]}"#]);
    assert_eq!(code, 1);
}

#[test]
fn padic_extension_of_minus_one() {
    let (v, code) = report(&["padic-extend", "--p", "2", "--n", "4", "--x=-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["x"]["digits"], "1111");
    assert_eq!(v["result"]["value"]["value"], 0);
}

#[test]
fn syncong_on_a_table_algebra() {
    let alg = r#"{"n":4,"ops":[{"arity":1,"table":[1,2,3,2]}]}"#;
    let (v, code) = report(&["syncong", "--algebra", alg, "--subset", "[2]"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["congruence"], serde_json::json!([[0], [1, 3], [2]]));
    assert_eq!(v["result"]["lattice"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_suite_single_criterion() {
    let (v, code) = report(&["verify-suite", "2"]);
    assert_eq!(code, 0);
    assert!(v["summary"].as_str().unwrap().contains("criterion  2 PASS"));
    let (_, code) = report(&["verify-suite", "12"]);
    assert_eq!(code, 2);
}
