use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use cpalg::exotic::{self, CPWitnessTable};
use cpalg::finalg::{ClosureKind, FiniteAlgebra};
use cpalg::fryingpan::{FryingPan, Op};
use cpalg::latgen::{self, Signature};
use cpalg::natint::{self, Domain, FnTable, Verdict};
use cpalg::padic::{self, PAdicApprox, ZpVerdict};
use cpalg::recsets::{Carrier, RecSet};
use cpalg::Error;

#[derive(Parser, Debug)]
#[command(name = "cpalg", version, about = "Congruence preservation checks, DUO lattices and constructions")]
struct Cli {
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Cmd {
    /// Divisibility test on ℕ/ℤ tables, or on residues mod pⁿ
    CheckCp(TableArg),
    /// CP and nondecreasing
    CheckSpp(TableArg),
    /// Fit f(x) = f(1)·xⁿ on a window of ℕ\{0}
    CheckMonomial(TableArg),
    /// Generate the lattice or Boolean algebra of DUO preimages of a set
    Lattice(LatticeArgs),
    /// Syntactic congruence and preorder of a subset
    Syncong(SyncongArgs),
    /// Frying-pan monoid tables, generators and DOT
    Fryingpan(PanArgs),
    /// Build one of the explicit CP functions
    Construct(ConstructArgs),
    /// Extend a CP function on ℕ to ℤ_p at one point
    PadicExtend(PadicArgs),
    /// Run the acceptance criteria
    VerifySuite(SuiteArgs),
}

#[derive(Args, Debug, Serialize)]
struct TableArg {
    /// FnTable JSON, or `{"p","n","values"}` for residues; inline or a file path
    #[arg(long)]
    table: String,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CarrierArg {
    N,
    Z,
    Nx,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum KindArg {
    Lattice,
    Boolean,
}

impl From<KindArg> for ClosureKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lattice => ClosureKind::Lattice,
            KindArg::Boolean => ClosureKind::Boolean,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct LatticeArgs {
    #[arg(long, value_enum, ignore_case = true, default_value = "n")]
    carrier: CarrierArg,
    /// Recognizable set JSON, inline or a file path
    #[arg(long)]
    set: String,
    /// `+`, `x` or `+,x`
    #[arg(long, default_value = "+")]
    signature: String,
    #[arg(long, value_enum, default_value = "lattice")]
    kind: KindArg,
    /// Also test whether f⁻¹(L) is a member, for this FnTable
    #[arg(long)]
    finv: Option<String>,
    /// Emit the Hasse diagram as DOT
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug, Serialize)]
struct SyncongArgs {
    /// FiniteAlgebra JSON; requires --subset
    #[arg(long, conflicts_with = "recset")]
    algebra: Option<String>,
    /// Elements of the subset as a JSON array
    #[arg(long, requires = "algebra")]
    subset: Option<String>,
    /// Recognizable set JSON: reports its syntactic parameters under +
    #[arg(long)]
    recset: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct PanArgs {
    #[arg(long)]
    a: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    dot: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum Construction {
    #[value(name = "e-factorial")]
    #[serde(rename = "e-factorial")]
    EFactorial,
    #[value(name = "zigzag")]
    #[serde(rename = "zigzag")]
    Zigzag,
    #[value(name = "appendix-F")]
    #[serde(rename = "appendix-F")]
    AppendixF,
    #[value(name = "window-lift")]
    #[serde(rename = "window-lift")]
    WindowLift,
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    #[arg(value_enum)]
    which: Construction,
    /// Last window point
    #[arg(long, default_value_t = 16)]
    max: u64,
    /// Target table for window-lift
    #[arg(long)]
    target: Option<String>,
    /// Include the full value table in the report
    #[arg(long)]
    values: bool,
}

#[derive(Args, Debug, Serialize)]
struct PadicArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
    /// The point, any integer
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// FnTable on ℕ to extend; the construction F is used when absent
    #[arg(long)]
    table: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct SuiteArgs {
    /// Criteria to run (default: all)
    ids: Vec<u8>,
}

struct Report {
    summary: String,
    result: Value,
    refuted: bool,
    /// raw text output (DOT) instead of the JSON envelope
    raw: Option<String>,
}

impl Report {
    fn json(summary: String, result: Value, refuted: bool) -> Self {
        Report { summary, result, refuted, raw: None }
    }
}

/// Inline JSON, or the contents of a file.
fn load(arg: &str) -> Result<Value, Error> {
    let text = match std::fs::read_to_string(arg) {
        Ok(t) => t,
        Err(_) => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{arg}: {e}")))
}

fn load_table(arg: &str) -> Result<FnTable, Error> {
    Ok(serde_json::from_value(load(arg)?)?)
}

fn verdict_report(name: &str, v: Verdict) -> Report {
    let summary = match &v {
        Verdict::Refuted { witness } => format!("{name}: refuted ({})", serde_json::to_string(witness).unwrap()),
        other => format!("{name}: {}", serde_json::to_value(other).unwrap()["verdict"].as_str().unwrap_or("ok")),
    };
    let refuted = v.is_refuted();
    Report::json(summary, serde_json::to_value(v).unwrap(), refuted)
}

fn check_cp(a: &TableArg) -> Result<Report, Error> {
    let v = load(&a.table)?;
    if v.get("p").is_some() {
        let p = v["p"].as_u64().ok_or_else(|| Error::Input("p must be a positive integer".into()))?;
        let n = v["n"].as_u64().ok_or_else(|| Error::Input("n must be a positive integer".into()))? as u32;
        let vals: Vec<u64> = serde_json::from_value(v["values"].clone())?;
        let verdict = padic::check_cp_zp(p, n, &vals)?;
        let refuted = matches!(verdict, ZpVerdict::Refuted { .. });
        let summary = match &verdict {
            ZpVerdict::ConsistentCp => format!("check-cp on Z/{p}^{n}: consistent"),
            ZpVerdict::Refuted { x, y, .. } => format!("check-cp on Z/{p}^{n}: refuted at ({x}, {y})"),
        };
        return Ok(Report::json(summary, serde_json::to_value(verdict).unwrap(), refuted));
    }
    let t: FnTable = serde_json::from_value(v)?;
    Ok(verdict_report("check-cp", natint::check_cp_additive(&t)))
}

fn lattice(a: &LatticeArgs) -> Result<Report, Error> {
    let (domain, default) = match a.carrier {
        CarrierArg::N => (Domain::N, Carrier::N),
        CarrierArg::Z => (Domain::Z, Carrier::Z),
        CarrierArg::Nx => (Domain::Nx, Carrier::N),
    };
    let base = RecSet::from_json(&load(&a.set)?, Some(default))?;
    let sig: Signature = a.signature.parse()?;
    let fam = latgen::generate(&base, domain, sig, a.kind.into())?;
    if a.dot {
        return Ok(Report { summary: String::new(), result: Value::Null, refuted: false, raw: Some(fam.to_dot()) });
    }
    let mut result = fam.to_json();
    let mut refuted = false;
    let mut summary = format!("{} members in the {:?} family of {base} over {sig}", fam.len(), fam.kind());
    if let Some(t) = &a.finv {
        let f = load_table(t)?;
        let v = fam.check_finv_in(&f)?;
        refuted = !v.is_matched();
        summary.push_str(if refuted { "; f⁻¹(L) is not a member" } else { "; f⁻¹(L) is a member" });
        result["finv"] = serde_json::to_value(v).unwrap();
    }
    Ok(Report::json(summary.to_lowercase(), result, refuted))
}

fn syncong(a: &SyncongArgs) -> Result<Report, Error> {
    if let Some(r) = &a.recset {
        let s = RecSet::from_json(&load(r)?, None)?;
        let result = match &s {
            RecSet::N(u) => {
                let (sa, sk) = u.syntactic_index();
                json!({"carrier": "N", "a": sa, "k": sk, "classes": sa + sk})
            }
            RecSet::Z(z) => {
                let k = z.normalize().k();
                json!({"carrier": "Z", "k": k, "classes": k})
            }
        };
        return Ok(Report::json(format!("syntactic parameters of {s}: {result}"), result, false));
    }
    let alg: FiniteAlgebra = serde_json::from_value(load(a.algebra.as_deref().unwrap_or_default())?)?;
    let elems: Vec<usize> = serde_json::from_value(load(a.subset.as_deref().unwrap_or("[]"))?)?;
    if elems.iter().any(|&e| e >= alg.size()) {
        return Err(Error::Input("subset element outside the carrier".into()));
    }
    let l = cpalg::finalg::subset(alg.size(), &elems);
    let cong = alg.syntactic_congruence(&l)?;
    let pre = alg.syntactic_preorder(&l)?;
    let lat = alg.lattice_closure(&l, ClosureKind::Lattice)?;
    let boo = alg.lattice_closure(&l, ClosureKind::Boolean)?;
    let as_elems = |s: &Vec<bool>| -> Vec<usize> { (0..s.len()).filter(|&x| s[x]).collect() };
    let result = json!({
        "congruence": cong.blocks(),
        "preorder": pre.pairs(),
        "lattice": lat.iter().map(as_elems).collect::<Vec<_>>(),
        "boolean": boo.iter().map(as_elems).collect::<Vec<_>>(),
    });
    let summary = format!("syntactic congruence {cong}; lattice {} sets, Boolean algebra {} sets", lat.len(), boo.len());
    Ok(Report::json(summary, result, false))
}

fn fryingpan(a: &PanArgs) -> Result<Report, Error> {
    let p = FryingPan::new(a.a, a.k)?;
    if a.dot {
        return Ok(Report { summary: String::new(), result: Value::Null, refuted: false, raw: Some(p.to_dot()) });
    }
    let alg = p.algebra(&[Op::Suc, Op::Add, Op::Mul]);
    let gens: Vec<usize> = p.generators().into_iter().collect();
    let axioms = p.semiring_check().map(|f| json!({"axiom": f.axiom, "elements": f.elements}));
    let result = json!({
        "a": a.a,
        "k": a.k,
        "size": p.size(),
        "suc": alg.ops()[0].table,
        "add": alg.ops()[1].table,
        "mul": alg.ops()[2].table,
        "generators": gens,
        "surjective_morphisms": cpalg::bigjson::to_value(&p.surjective_morphism_count()),
        "semiring_failure": axioms,
    });
    let summary = format!("M_{{{},{}}}: {} elements, generators {:?}", a.a, a.k, p.size(), gens);
    Ok(Report::json(summary, result, false))
}

fn witness_report(name: &str, w: CPWitnessTable, values: bool) -> Report {
    let mut result = w.to_json();
    if !values {
        result["table"]["values"] = json!(format!("{} values omitted (use --values)", w.table.len()));
    }
    let mut summary = format!(
        "{name} on {}..={}: divisibility {} ({:?}, {} checks), f(x) >= x {}",
        w.table.lo(),
        w.table.hi(),
        w.divisibility_verified,
        w.divisibility_method,
        w.checks,
        w.over_linear
    );
    if let Some(v) = w.table.get(3) {
        summary.push_str(&format!(", f(3) = {v}"));
    }
    let refuted = !w.divisibility_verified;
    Report::json(summary, result, refuted)
}

fn construct(a: &ConstructArgs) -> Result<Report, Error> {
    let hi = i64::try_from(a.max).map_err(|_| Error::Input("--max too large".into()))?;
    let w = match a.which {
        Construction::EFactorial => {
            exotic::certify_table(FnTable::from_fn(Domain::N, 0, hi, |x| exotic::floor_e_factorial(x as u64))?)
        }
        Construction::Zigzag => {
            exotic::cp_window_lift(&FnTable::from_fn(Domain::N, 0, hi, |x| exotic::zigzag_f(x as u64))?)?
        }
        Construction::AppendixF => exotic::appendix_f(a.max)?,
        Construction::WindowLift => {
            let t = a.target.as_deref().ok_or_else(|| Error::Input("window-lift needs --target".into()))?;
            exotic::cp_window_lift(&load_table(t)?)?
        }
    };
    let name = serde_json::to_value(a.which).unwrap();
    Ok(witness_report(name.as_str().unwrap(), w, a.values))
}

fn padic_extend(a: &PadicArgs) -> Result<Report, Error> {
    let x: BigInt = a.x.trim().parse().map_err(|_| Error::Input(format!("{} is not an integer", a.x)))?;
    let x = PAdicApprox::new(a.p, a.n, &x)?;
    let f = match &a.table {
        Some(t) => exotic::certify_table(load_table(t)?),
        None => {
            let top = a.p.checked_pow(a.n).ok_or_else(|| Error::Bound("pⁿ overflows".into()))?;
            exotic::appendix_f((top - 1).max(3))?
        }
    };
    let y = padic::cp_extend(&f, &x)?;
    let summary = format!("f̂({}) = {} (digits {})", x, y, y.digit_string());
    Ok(Report::json(summary, json!({"x": x.to_json(), "value": y.to_json()}), false))
}

fn verify_suite(a: &SuiteArgs) -> Result<Report, Error> {
    let ids: Vec<u8> = if a.ids.is_empty() { (1..=11).collect() } else { a.ids.clone() };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=11).contains(&i)) {
        return Err(Error::Input(format!("no criterion {bad}")));
    }
    let outcomes: Vec<_> = ids.iter().map(|&i| cpalg_acceptance::run(i)).collect();
    let lines: Vec<String> = outcomes.iter().map(|o| o.line()).collect();
    let failed = outcomes.iter().any(|o| !o.passed);
    Ok(Report::json(lines.join("\n"), serde_json::to_value(&outcomes).unwrap(), failed))
}

fn run(cmd: &Cmd) -> Result<Report, Error> {
    match cmd {
        Cmd::CheckCp(a) => check_cp(a),
        Cmd::CheckSpp(a) => Ok(verdict_report("check-spp", natint::check_spp_additive(&load_table(&a.table)?))),
        Cmd::CheckMonomial(a) => Ok(verdict_report("check-monomial", natint::check_cp_multiplicative(&load_table(&a.table)?)?)),
        Cmd::Lattice(a) => lattice(a),
        Cmd::Syncong(a) => syncong(a),
        Cmd::Fryingpan(a) => fryingpan(a),
        Cmd::Construct(a) => construct(a),
        Cmd::PadicExtend(a) => padic_extend(a),
        Cmd::VerifySuite(a) => verify_suite(a),
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::CheckCp(_) => "check-cp",
        Cmd::CheckSpp(_) => "check-spp",
        Cmd::CheckMonomial(_) => "check-monomial",
        Cmd::Lattice(_) => "lattice",
        Cmd::Syncong(_) => "syncong",
        Cmd::Fryingpan(_) => "fryingpan",
        Cmd::Construct(_) => "construct",
        Cmd::PadicExtend(_) => "padic-extend",
        Cmd::VerifySuite(_) => "verify-suite",
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    let options = serde_json::to_value(&cli.cmd).unwrap();
    let (text, code) = match run(&cli.cmd) {
        Ok(r) => {
            let code = if r.refuted { 1 } else { 0 };
            let text = match r.raw {
                Some(raw) => raw,
                None => {
                    let env = json!({
                        "schema": 1,
                        "command": name,
                        "options": options,
                        "summary": r.summary,
                        "result": r.result,
                    });
                    serde_json::to_string_pretty(&env).unwrap() + "\n"
                }
            };
            (text, code)
        }
        Err(e) => {
            let code = if matches!(e, Error::Invariant(_)) { 3 } else { 2 };
            eprintln!("cpalg {name}: {e}");
            let env = json!({"schema": 1, "command": name, "options": options, "error": e.to_string()});
            (serde_json::to_string_pretty(&env).unwrap() + "\n", code)
        }
    };
    if let Err(e) = emit(&cli.out, &text) {
        eprintln!("cpalg: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
