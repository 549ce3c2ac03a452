use cpalg::finalg::{ClosureKind, FiniteAlgebra};
use cpalg::fryingpan::{FryingPan, Op};
use cpalg::latgen::{generate, GeneratedFamily, Signature};
use cpalg::natint::{Domain, FnTable};
use cpalg::recsets::{RecSet, UPSetN, UPSetZ};
use num_bigint::BigInt;
use proptest::prelude::*;

const KINDS: [ClosureKind; 2] = [ClosureKind::Lattice, ClosureKind::Boolean];
const SIGS: [Signature; 3] = [Signature::Add, Signature::Mul, Signature::AddMul];

fn nset() -> impl Strategy<Value = UPSetN> {
    (0usize..5, 1usize..6).prop_flat_map(|(a, k)| {
        (prop::collection::vec(any::<bool>(), a), prop::collection::vec(any::<bool>(), k))
            .prop_map(move |(f, r)| UPSetN::new(a, k, f, r).unwrap())
    })
}

fn zset() -> impl Strategy<Value = UPSetZ> {
    (1usize..9).prop_flat_map(|k| prop::collection::vec(any::<bool>(), k).prop_map(move |g| UPSetZ::new(k, g).unwrap()))
}

/// The quotient algebra whose elements are the cells of `base`.
fn quotient(base: &RecSet, sig: Signature) -> FiniteAlgebra {
    let ops: &[Op] = match sig {
        Signature::Add => &[Op::Add],
        Signature::Mul => &[Op::Mul],
        Signature::AddMul => &[Op::Add, Op::Mul],
    };
    match base {
        RecSet::N(s) => FryingPan::new(s.a(), s.k()).unwrap().algebra(ops),
        RecSet::Z(s) => {
            let k = s.k();
            let mut alg = FiniteAlgebra::new(k);
            for op in ops {
                let t = (0..k * k)
                    .map(|i| match op {
                        Op::Add => (i / k + i % k) % k,
                        _ => (i / k) * (i % k) % k,
                    })
                    .collect();
                alg.push_op(2, t).unwrap();
            }
            alg
        }
    }
}

fn as_masks(sets: &[Vec<bool>]) -> Vec<u128> {
    let mut out: Vec<u128> = sets
        .iter()
        .map(|s| s.iter().enumerate().filter(|(_, &b)| b).fold(0u128, |m, (i, _)| m | 1 << i))
        .collect();
    out.sort();
    out
}

fn check_against_quotient(base: &RecSet, domain: Domain) -> Result<(), TestCaseError> {
    for sig in SIGS {
        let alg = quotient(base, sig);
        let n = alg.size();
        let l: Vec<bool> = (0..n).map(|c| base.member(&BigInt::from(c)).unwrap()).collect();
        for kind in KINDS {
            let fam = generate(base, domain, sig, kind).unwrap();
            prop_assert!(fam.is_closed());
            prop_assert_eq!(fam.masks(), &as_masks(&alg.lattice_closure(&l, kind).unwrap())[..], "{} {} {:?}", base, sig, kind);
            saturation(&fam, &alg, &l)?;
        }
    }
    Ok(())
}

/// Boolean members are unions of syntactic classes; lattice members are initial segments.
fn saturation(fam: &GeneratedFamily, alg: &FiniteAlgebra, l: &[bool]) -> Result<(), TestCaseError> {
    let cong = alg.syntactic_congruence(l).unwrap();
    let pre = alg.syntactic_preorder(l).unwrap();
    for &m in fam.masks() {
        let s: Vec<bool> = (0..alg.size()).map(|c| m >> c & 1 == 1).collect();
        match fam.kind() {
            ClosureKind::Boolean => prop_assert!(cong.saturates(&s)),
            ClosureKind::Lattice => prop_assert!(pre.pairs().iter().all(|&(x, y)| !s[y] || s[x])),
        }
    }
    Ok(())
}

/// Sampled `f⁻¹(X)` on cells, `None` when a cell gets both answers.
fn sampled_preimage(fam: &GeneratedFamily, m: u128, f: &FnTable) -> Option<u128> {
    let space = fam.space();
    let x_set = space.mask_to_set(m);
    let mut seen: Vec<Option<bool>> = vec![None; space.num_cells()];
    for (x, fx) in f.iter() {
        let c = space.cell_of(&BigInt::from(x)).unwrap();
        let v = x_set.member(fx).unwrap();
        match seen[c] {
            Some(w) if w != v => return None,
            _ => seen[c] = Some(v),
        }
    }
    Some(seen.iter().enumerate().filter(|(_, v)| **v == Some(true)).fold(0u128, |acc, (c, _)| acc | 1 << c))
}

fn closed_under(fam: &GeneratedFamily, f: &FnTable) -> bool {
    fam.masks().iter().all(|&m| sampled_preimage(fam, m, f).is_some_and(|p| fam.masks().binary_search(&p).is_ok()))
}

proptest! {
    #[test]
    fn n_families_match_quotient_closure(s in nset()) {
        check_against_quotient(&RecSet::N(s), Domain::N)?;
    }

    #[test]
    fn z_families_match_quotient_closure(s in zset()) {
        check_against_quotient(&RecSet::Z(s), Domain::Z)?;
    }

    #[test]
    fn lattice_closed_implies_boolean_closed(s in nset(), coef in prop::collection::vec(0i64..6, 1..4), vals in prop::collection::vec(0i64..12, 30)) {
        let base = RecSet::N(s);
        let w = 3 * (base_span(&base) as i64) + 3;
        let poly = FnTable::from_fn(Domain::N, 0, w, |x| coef.iter().rev().fold(BigInt::from(0), |acc, &c| acc * x + c)).unwrap();
        let rand = FnTable::from_fn(Domain::N, 0, w.min(29), |x| BigInt::from(vals[x as usize])).unwrap();
        for f in [poly, rand] {
            let lat = generate(&base, Domain::N, Signature::Add, ClosureKind::Lattice).unwrap();
            if closed_under(&lat, &f) {
                let boo = generate(&base, Domain::N, Signature::Add, ClosureKind::Boolean).unwrap();
                prop_assert!(closed_under(&boo, &f), "{} {:?}", base, f.values());
            }
        }
    }

    #[test]
    fn nx_families_are_closed(elems in prop::collection::btree_set(1u64..25, 1..6)) {
        let v: Vec<u64> = elems.into_iter().collect();
        let base = RecSet::N(UPSetN::finite(&v).unwrap());
        for kind in KINDS {
            let fam = generate(&base, Domain::Nx, Signature::Mul, kind).unwrap();
            prop_assert!(fam.is_closed());
            for m in fam.members() {
                prop_assert!(fam.member_of(&m).unwrap().is_some());
            }
        }
    }
}

fn base_span(base: &RecSet) -> usize {
    match base {
        RecSet::N(s) => s.a() + s.k(),
        RecSet::Z(s) => s.k(),
    }
}

#[test]
fn residue_families_are_full_powersets() {
    for k in 1..=5usize {
        for g in 1u32..(1 << k) {
            let s = UPSetZ::new(k, (0..k).map(|i| g >> i & 1 == 1).collect()).unwrap();
            if s.k() != k {
                continue;
            }
            let base = RecSet::Z(s);
            let add = generate(&base, Domain::Z, Signature::Add, ClosureKind::Lattice).unwrap();
            let both = generate(&base, Domain::Z, Signature::AddMul, ClosureKind::Lattice).unwrap();
            assert_eq!(add.masks(), both.masks(), "{base}");
            let expect: Vec<u128> = if k == 1 { vec![1] } else { (0..1u128 << k).collect() };
            assert_eq!(add.masks(), &expect[..], "{base}");
        }
    }
}
