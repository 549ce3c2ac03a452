//! Acceptance criteria for `cpalg`. Each criterion compares the library
//! against an oracle from [`oracle`] or against fixed expected values.

pub mod oracle;

use cpalg::exotic::{appendix_f, cp_window_lift, zigzag_f, DivisibilityMethod};
use cpalg::finalg::{BinRel, ClosureKind, FiniteAlgebra};
use cpalg::fryingpan::FryingPan;
use cpalg::latgen::{generate, regular_check, regular_counterexample_check, DuoSpace, Signature};
use cpalg::natint::{
    brute_force_preserves, check_cp_additive, check_cp_multiplicative, table_from_i64, CongruenceSpec, Domain,
    FnTable, Verdict, Witness,
};
use cpalg::padic::{cp_extend, minus_one, PAdicApprox};
use cpalg::recsets::{RecSet, RegSetZ, UPSetN, UPSetZ};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks: u64,
    pub detail: String,
    /// Set only when a failure matches a documented, analysed discrepancy.
    pub known_deviation: Option<String>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {:>2} {status}: {} ({} checks; {})", self.id, self.title, self.checks, self.detail);
        if let Some(d) = &self.known_deviation {
            s.push_str(&format!(" [known deviation: {d}]"));
        }
        s
    }
}

pub const TITLES: [&str; 11] = [
    "frying-pan morphism law",
    "generator formula against orbit closure",
    "divisibility verdict implies preservation on {0..4} -> {0..10}",
    "residue-class lattices over Z",
    "divisor lattice of {1,2,4,5,10,20} over (N\\{0}, x)",
    "monomial preimages over (N\\{0}, x)",
    "certificates of F on 0..1023",
    "zig-zag lift on 0..16",
    "p-adic tower and extension of F at -1",
    "generic engine on 200 random algebras",
    "regular versus recognizable preimage over Z",
];

pub fn run(id: u8) -> Outcome {
    let (passed, checks, detail, dev) = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        _ => panic!("no criterion {id}"),
    };
    Outcome { id, title: TITLES[id as usize - 1], passed, checks, detail, known_deviation: dev }
}

pub fn run_all() -> Vec<Outcome> {
    (1..=11).map(run).collect()
}

type Res = (bool, u64, String, Option<String>);

fn plain(failures: u64, checks: u64, what: &str) -> Res {
    (failures == 0, checks, format!("{failures} {what}"), None)
}

fn c1() -> Res {
    let (mut checks, mut bad) = (0u64, 0u64);
    for a in 0..=11u64 {
        for k in 1..=12 - a {
            let p = FryingPan::new(a as usize, k as usize).unwrap();
            let top = 3 * (a + k);
            for x in 0..=top {
                let px = p.phi_u(x);
                bad += u64::from(px as u64 != oracle::phi(a, k, x));
                bad += u64::from(p.phi_u(x + 1) != p.suc(px));
                checks += 2;
                for y in 0..=top {
                    let py = p.phi_u(y);
                    bad += u64::from(p.phi_u(x + y) != p.add(px, py));
                    bad += u64::from(p.phi_u(x * y) != p.mul(px, py));
                    checks += 2;
                }
            }
        }
    }
    plain(bad, checks, "failures")
}

fn c2() -> Res {
    let (mut checks, mut bad) = (0u64, 0u64);
    for a in 0..=11u64 {
        for k in 1..=12 - a {
            let p = FryingPan::new(a as usize, k as usize).unwrap();
            let lib: BTreeSet<u64> = p.generators().into_iter().map(|g| g as u64).collect();
            bad += u64::from(lib != oracle::generators(a, k));
            checks += 1;
            if a <= 1 {
                bad += u64::from(lib.len() as u64 != oracle::totient(k));
                checks += 1;
            }
        }
    }
    plain(bad, checks, "mismatches")
}

fn c3() -> Res {
    let (mut tables, mut cp, mut bad) = (0u64, 0u64, 0u64);
    let congs: Vec<CongruenceSpec> =
        (0..5u64).flat_map(|a| (1..=5 - a).map(move |k| CongruenceSpec::nak(a, k).unwrap())).collect();
    let mut v = [0i64; 5];
    for code in 0..11u32.pow(5) {
        let mut c = code;
        for slot in v.iter_mut() {
            *slot = (c % 11) as i64;
            c /= 11;
        }
        tables += 1;
        let t = table_from_i64(Domain::N, 0, &v).unwrap();
        if check_cp_additive(&t) == Verdict::ConsistentCp {
            cp += 1;
            let lib = brute_force_preserves(&t, &congs).unwrap() == Verdict::Preserved;
            bad += u64::from(!lib || !oracle::preserves_all_nak(&v, 5));
        }
    }
    // the lifted example: f(0) = f(1) = 0, f(2) = 2, then least values keeping divisibility
    let mut lift = vec![0i64, 0, 2];
    for x in 3..=10i64 {
        let v = (0..).find(|&v| (0..x).all(|y| (v - lift[y as usize]) % (x - y) == 0)).unwrap();
        lift.push(v);
    }
    let mut neg_ok = 0;
    let below = check_cp_additive(&table_from_i64(Domain::N, 0, &lift).unwrap());
    if matches!(below, Verdict::Refuted { witness: Witness::BelowDiagonal { x: 1, .. } }) {
        neg_ok += 1;
    }
    let pow2 = FnTable::from_fn(Domain::Z, 0, 10, |x| BigInt::from(2).pow(x as u32)).unwrap();
    if check_cp_additive(&pow2)
        == (Verdict::Refuted { witness: Witness::Divisibility { x: 2, y: 0, fx: 4.into(), fy: 1.into() } })
    {
        neg_ok += 1;
    }
    let pass = bad == 0 && neg_ok == 2;
    (pass, tables + 2, format!("{cp} CP tables, {bad} implication failures, {neg_ok}/2 known negatives refuted"), None)
}

fn c4() -> Res {
    let (mut checks, mut bad) = (0u64, 0u64);
    let mut notes = Vec::new();
    for k in 1..=5usize {
        for g in 1u32..(1 << k) {
            let s = UPSetZ::new(k, (0..k).map(|i| g >> i & 1 == 1).collect()).unwrap();
            if s.k() != k {
                continue;
            }
            let base = RecSet::Z(s);
            let add = generate(&base, Domain::Z, Signature::Add, ClosureKind::Lattice).unwrap();
            let both = generate(&base, Domain::Z, Signature::AddMul, ClosureKind::Lattice).unwrap();
            checks += 1;
            let sets = |fam: &cpalg::latgen::GeneratedFamily| -> BTreeSet<Vec<bool>> {
                fam.members()
                    .iter()
                    .map(|m| (-2 * k as i64..2 * k as i64).map(|x| m.member(&x.into()).unwrap()).collect())
                    .collect()
            };
            // expected family: every G + kZ; for k = 1 (L = Z) only L itself
            let expect: BTreeSet<Vec<bool>> = if k == 1 {
                [vec![true; 4]].into()
            } else {
                (0u32..1 << k)
                    .map(|gg| (-2 * k as i64..2 * k as i64).map(|x| gg >> x.rem_euclid(k as i64) & 1 == 1).collect())
                    .collect()
            };
            if sets(&add) != expect || sets(&both) != expect {
                bad += 1;
                notes.push(format!("{base}"));
            }
        }
    }
    let mut detail = format!("{bad} deviations; families of size 2^k for k = 2..5, {{Z}} for k = 1");
    if !notes.is_empty() {
        detail.push_str(&format!(": {}", notes.join(", ")));
    }
    (bad == 0, checks, detail, None)
}

fn set_of(elems: &[u64]) -> BTreeSet<u64> {
    elems.iter().copied().collect()
}

fn c5() -> Res {
    let l = set_of(&[1, 2, 4, 5, 10, 20]);
    let base = UPSetN::finite(&[1, 2, 4, 5, 10, 20]).unwrap();
    // expected L/a table
    let table: [(u64, &[u64]); 7] = [
        (1, &[1, 2, 4, 5, 10, 20]),
        (2, &[1, 2, 5, 10]),
        (4, &[1, 5]),
        (5, &[1, 2, 4]),
        (10, &[1, 2]),
        (20, &[1]),
        (3, &[]),
    ];
    let mut table_bad = 0;
    let mut checks = 0u64;
    let lib_div = |a: u64| -> BTreeSet<u64> {
        let d = base.division_preimage(&BigInt::from(a)).unwrap();
        (1..=20).filter(|&x| d.contains(x as usize)).collect()
    };
    for (a, expect) in table {
        checks += 2;
        table_bad += u64::from(lib_div(a) != set_of(expect));
        table_bad += u64::from(oracle::divide(&l, a) != set_of(expect));
    }
    for a in (1..=41).filter(|a| !l.contains(a)) {
        checks += 1;
        table_bad += u64::from(!lib_div(a).is_empty());
    }
    let expected: BTreeSet<BTreeSet<u64>> = [
        &[][..],
        &[1],
        &[1, 2],
        &[1, 5],
        &[1, 2, 4],
        &[1, 2, 5],
        &[1, 2, 4, 5],
        &[1, 2, 5, 10],
        &[1, 2, 4, 5, 10, 20],
    ]
    .iter()
    .map(|s| set_of(s))
    .collect();
    let fam = generate(&RecSet::N(base.clone()), Domain::Nx, Signature::Mul, ClosureKind::Lattice).unwrap();
    let lib: BTreeSet<BTreeSet<u64>> = fam
        .members()
        .iter()
        .map(|m| (1..=40u64).filter(|&x| m.member(&x.into()).unwrap()).collect())
        .collect();
    let oracle_fam = oracle::divisor_lattice(&l);
    checks += 2;
    let list_ok = lib == expected;
    let extra: Vec<String> = lib.difference(&expected).map(|s| format!("{s:?}")).collect();
    let missing: Vec<String> = expected.difference(&lib).map(|s| format!("{s:?}")).collect();
    let detail = format!(
        "L/a table: {table_bad} mismatches; lattice: library {} sets, oracle {} sets, expected list {} sets; extra {:?}, missing {:?}",
        lib.len(),
        oracle_fam.len(),
        expected.len(),
        extra,
        missing
    );
    // the analysed discrepancy: the union L/5 ∪ L/2 = {1,2,4,5,10} must be a member
    let union: BTreeSet<u64> = oracle::divide(&l, 5).union(&oracle::divide(&l, 2)).copied().collect();
    let documented = !list_ok
        && table_bad == 0
        && lib == oracle_fam
        && missing.is_empty()
        && lib.difference(&expected).cloned().collect::<Vec<_>>() == vec![union];
    let dev = documented.then(|| {
        "the expected 9-set list omits {1,2,4,5,10} = L/5 ∪ L/2, which any lattice containing L/5 and L/2 must contain"
            .to_string()
    });
    (list_ok && table_bad == 0, checks, detail, dev)
}

fn c6() -> Res {
    let mut samples: Vec<Vec<u64>> = vec![vec![]];
    for x in 1..=60u64 {
        samples.push(vec![x]);
        for y in x + 1..=60 {
            samples.push(vec![x, y]);
        }
    }
    for m in 0u32..1 << 12 {
        let s: Vec<u64> = (1..=12u64).filter(|i| m >> (i - 1) & 1 == 1).collect();
        if s.len() > 2 {
            samples.push(s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..400 {
        let density = rng.gen_range(0.05..0.6);
        samples.push((1..=60u64).filter(|_| rng.gen_bool(density)).collect());
    }
    samples.push(vec![1, 2, 4, 5, 10, 20]);
    let (mut checks, mut bad) = (0u64, 0u64);
    let mut first_bad = None;
    for s in &samples {
        let base = RecSet::N(UPSetN::finite(s).unwrap());
        let space = DuoSpace::new(&base, Domain::Nx, Signature::Mul).unwrap();
        let w = space.required_window().max(2) as i64;
        for c in 1..=3i64 {
            for n in 1..=3u32 {
                let f = FnTable::from_fn(Domain::Nx, 1, w, |x| BigInt::from(c) * BigInt::from(x).pow(n)).unwrap();
                checks += 1;
                let ok = matches!(space.check_finv_in(&f, ClosureKind::Lattice), Ok(v) if v.is_matched());
                if !ok {
                    bad += 1;
                    first_bad.get_or_insert(format!("{s:?} c={c} n={n}"));
                }
            }
        }
    }
    let succ = FnTable::from_fn(Domain::Nx, 1, 10, |x| BigInt::from(x + 1)).unwrap();
    let succ_refuted = check_cp_multiplicative(&succ).unwrap().is_refuted();
    checks += 1;
    let mut detail =
        format!("{} sets L, c and n in 1..3, {bad} unmatched; x+1 refuted: {succ_refuted}", samples.len());
    if let Some(b) = first_bad {
        detail.push_str(&format!("; first unmatched {b}"));
    }
    (bad == 0 && succ_refuted, checks, detail, None)
}

fn c7() -> Res {
    let w = match appendix_f(1023) {
        Ok(w) => w,
        Err(e) => return (false, 0, format!("construction failed: {e}"), None),
    };
    let v = w.values();
    let pairwise = w.divisibility_verified && w.divisibility_method == DivisibilityMethod::Pairwise;
    let oracle_pairs = oracle::divisibility_failure(v).is_none();
    let pow2 = w.power_of_two == Some(true)
        && (1..=10u32).all(|n| (&v[(1usize << n) - 1] % BigInt::from(1u64 << n)).is_zero());
    let over = (3..v.len()).all(|x| v[x] >= BigInt::from(x));
    let f3 = v[3] == BigInt::from(12);
    let prefix = oracle::appendix_f(64) == v[..=64];
    let pass = pairwise && w.checks == 523_776 && oracle_pairs && pow2 && over && f3 && prefix;
    let detail = format!(
        "pairwise {pairwise} over {} pairs, oracle pairs {oracle_pairs}, F(2^n-1) ≡ 0 {pow2}, F(x) >= x {over}, F(3) = {}, oracle prefix 0..64 {prefix}",
        w.checks, v[3]
    );
    (pass, w.checks + 4, detail, None)
}

fn c8() -> Res {
    let t = FnTable::from_fn(Domain::N, 0, 16, |x| zigzag_f(x as u64)).unwrap();
    let same_target = (0..=16u64).all(|x| zigzag_f(x) == oracle::zigzag(x));
    let w = cp_window_lift(&t).unwrap();
    let g = w.values();
    let alternation = (1..g.len()).all(|x| if x % 2 == 0 { g[x] > g[x - 1] } else { g[x] < g[x - 1] });
    let divisible = oracle::divisibility_failure(g).is_none() && w.divisibility_verified;
    let pass = same_target && alternation && divisible;
    let detail = format!("target matches oracle {same_target}, alternation {alternation}, pairwise divisibility {divisible}");
    (pass, 17 + 136, detail, None)
}

fn c9() -> Res {
    let mut checks = 0u64;
    let mut bad = 0u64;
    for p in [2u64, 3, 5] {
        for n in 1..=6u32 {
            let m = p.pow(n);
            let xs: Vec<PAdicApprox> = (0..m).map(|v| PAdicApprox::new(p, n, &BigInt::from(v)).unwrap()).collect();
            for x in &xs {
                for k in 1..n {
                    // one step at a time agrees with a direct reduction
                    checks += 1;
                    bad += u64::from(x.reduce(k + 1).unwrap().reduce(k).unwrap() != x.reduce(k).unwrap());
                }
            }
            if n == 1 {
                continue;
            }
            let low: Vec<PAdicApprox> = xs.iter().map(|x| x.reduce(n - 1).unwrap()).collect();
            for (x, lx) in xs.iter().zip(&low) {
                for (y, ly) in xs.iter().zip(&low) {
                    checks += 2;
                    bad += u64::from(x.add(y).unwrap().reduce(n - 1).unwrap() != lx.add(ly).unwrap());
                    bad += u64::from(x.mul(y).unwrap().reduce(n - 1).unwrap() != lx.mul(ly).unwrap());
                }
            }
        }
    }
    let f = match appendix_f(65535) {
        Ok(f) => f,
        Err(e) => return (false, checks, format!("construction failed: {e}"), None),
    };
    let mut ext_bad = 0;
    for n in 1..=16 {
        checks += 1;
        let ok = matches!(cp_extend(&f, &minus_one(2, n).unwrap()), Ok(v) if v.value().is_zero());
        ext_bad += u64::from(!ok);
    }
    let detail = format!(
        "{bad} reduction failures over all pairs for p in {{2,3,5}}, n <= 6; {ext_bad} nonzero extensions at -1 for n <= 16"
    );
    (bad == 0 && ext_bad == 0, checks, detail, None)
}

/// Random tables, and for every fourth algebra a relabelled group as first operation.
fn random_algebra(rng: &mut ChaCha8Rng, with_group: bool) -> (usize, Vec<oracle::Op>) {
    let n = if with_group { rng.gen_range(2..=4) } else { rng.gen_range(1..=4) };
    let mut ops: Vec<oracle::Op> = Vec::new();
    if with_group {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let klein = n == 4 && rng.gen_bool(0.5);
        let law = |x: usize, y: usize| if klein { x ^ y } else { (x + y) % n };
        ops.push((2, (0..n * n).map(|i| perm[law(inv[i / n], inv[i % n])]).collect()));
    }
    let extra = if with_group { rng.gen_range(0..=1) } else { rng.gen_range(1..=2) };
    for _ in 0..extra {
        let ar = rng.gen_range(1..=2usize);
        ops.push((ar, (0..n.pow(ar as u32)).map(|_| rng.gen_range(0..n)).collect()));
    }
    (n, ops)
}

fn build(n: usize, ops: &[oracle::Op]) -> FiniteAlgebra {
    let mut a = FiniteAlgebra::new(n);
    for (ar, t) in ops {
        a.push_op(*ar, t.clone()).unwrap();
    }
    a
}

fn c10() -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut checks, mut groups) = (0u64, 0u64);
    let mut fails: Vec<String> = Vec::new();
    for i in 0..200 {
        let (n, ops) = random_algebra(&mut rng, i % 4 == 0);
        let alg = build(n, &ops);
        let ocong = oracle::congruences(n, &ops);
        let lib: Vec<Vec<usize>> = alg.all_congruences().iter().map(|p| p.classes().to_vec()).collect();
        checks += 1;
        if lib != ocong {
            fails.push(format!("algebra {i}: congruences"));
        }
        let trans = oracle::translations(n, &ops);
        let subsets: Vec<Vec<bool>> = (0u32..1 << n).map(|m| (0..n).map(|x| m >> x & 1 == 1).collect()).collect();
        let fs: Vec<Vec<usize>> = (0..10).map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect()).collect();
        for l in &subsets {
            let syn = alg.syntactic_congruence(l).unwrap();
            let same = |x: usize, y: usize| trans.iter().all(|t| l[t[x]] == l[t[y]]);
            let below = |x: usize, y: usize| trans.iter().all(|t| !l[t[y]] || l[t[x]]);
            checks += 1;
            let coarsest = (0..n).all(|x| (0..n).all(|y| syn.same(x, y) == same(x, y)))
                && ocong.iter().filter(|c| (0..n).all(|x| (0..n).all(|y| c[x] != c[y] || l[x] == l[y]))).all(|c| {
                    (0..n).all(|x| (0..n).all(|y| c[x] != c[y] || syn.same(x, y)))
                });
            if !coarsest {
                fails.push(format!("algebra {i}: syntactic congruence of {l:?}"));
            }
            for f in &fs {
                let pre: Vec<bool> = (0..n).map(|x| l[f[x]]).collect();
                let keeps = |r: &dyn Fn(usize, usize) -> bool| (0..n).all(|x| (0..n).all(|y| !r(x, y) || r(f[x], f[y])));
                if keeps(&below) {
                    checks += 1;
                    if alg.decompose_preimage_lattice(f, l).unwrap() != pre {
                        fails.push(format!("algebra {i}: lattice decomposition"));
                    }
                }
                if keeps(&same) {
                    checks += 1;
                    if alg.decompose_preimage_boolean(f, l).unwrap() != pre {
                        fails.push(format!("algebra {i}: boolean decomposition"));
                    }
                }
            }
        }
        if i % 4 != 0 {
            continue;
        }
        groups += 1;
        checks += 1;
        if alg.check_group_op(0).is_err() {
            fails.push(format!("algebra {i}: group not certified"));
            continue;
        }
        let closures: Vec<[Vec<Vec<bool>>; 2]> = subsets
            .iter()
            .map(|l| [alg.lattice_closure(l, ClosureKind::Lattice).unwrap(), alg.lattice_closure(l, ClosureKind::Boolean).unwrap()])
            .collect();
        for _ in 0..50 {
            let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let iii = ocong.iter().all(|c| (0..n).all(|x| (0..n).all(|y| c[x] != c[y] || c[f[x]] == c[f[y]])));
            let in_all = |kind: usize| {
                subsets.iter().zip(&closures).all(|(l, cl)| cl[kind].contains(&(0..n).map(|x| l[f[x]]).collect()))
            };
            let (v, vi) = (in_all(0), in_all(1));
            checks += 1;
            if !(iii == v && v == vi) {
                fails.push(format!("algebra {i}: conditions disagree ({iii}, {v}, {vi}) for f = {f:?}"));
            }
        }
        let orders = alg.stable_orders_of_group(0).unwrap();
        let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
        let oracle_orders = (0u32..1 << off.len())
            .filter(|m| {
                let r = |x: usize, y: usize| x == y || off.iter().position(|&p| p == (x, y)).is_some_and(|j| m >> j & 1 == 1);
                let trans_ok = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(r(x, y) && r(y, z)) || r(x, z))));
                let anti = (0..n).all(|x| (0..n).all(|y| x == y || !(r(x, y) && r(y, x))));
                trans_ok && anti && oracle::compatible(n, &ops, &r)
            })
            .count();
        checks += 1;
        if orders != vec![BinRel::identity(n)] || oracle_orders != 1 {
            fails.push(format!("algebra {i}: stable orders do not collapse"));
        }
    }
    let mut detail = format!("{} failures, {groups} group algebras", fails.len());
    if let Some(f) = fails.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    (fails.is_empty(), checks, detail, None)
}

fn c11() -> Res {
    let r = regular_counterexample_check();
    let refuted = !r.matched && r.reason.is_some();
    // the sampled preimage of 6 + 10N under x² is ±({4,6} + 10N)
    let shape = (-200i64..=200).all(|x| {
        let sq = x * x;
        (sq >= 6 && sq % 10 == 6) == matches!(x.abs() % 10, 4 | 6)
    });
    let rec = RegSetZ::new(UPSetN::progression(6, 10).unwrap(), UPSetN::progression(4, 10).unwrap());
    let rec_matched = regular_check(&rec, |x| BigInt::from(x) * x, 200, 100).matched;
    let z = RecSet::Z(UPSetZ::residues(10, &[6]).unwrap());
    let space = DuoSpace::new(&z, Domain::Z, Signature::Add).unwrap();
    let sq = FnTable::from_fn(Domain::Z, -10, 10, |x| BigInt::from(x) * x).unwrap();
    let lat_matched = space.check_finv_in(&sq, ClosureKind::Lattice).unwrap().is_matched();
    let pass = refuted && shape && rec_matched && lat_matched;
    let detail = format!(
        "6+10N: refuted {refuted} ({:?}, {} negative preimage points vs at most {} per translate); 6+10Z: matched {} (window), {} (lattice)",
        r.reason, r.preimage_negatives, r.max_translate_negatives, rec_matched, lat_matched
    );
    (pass, 4, detail, None)
}
