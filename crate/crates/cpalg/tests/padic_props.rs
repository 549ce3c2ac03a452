use cpalg::exotic::{appendix_f, certify_table};
use cpalg::latgen::{DuoSpace, Signature};
use cpalg::finalg::ClosureKind;
use cpalg::natint::{Domain, FnTable};
use cpalg::padic::{cp_extend, Divides, PAdicApprox, RecSetZp};
use cpalg::recsets::RecSet;
use num_bigint::BigInt;
use proptest::prelude::*;

fn z(p: u64, n: u32, v: u64) -> PAdicApprox {
    PAdicApprox::new(p, n, &BigInt::from(v)).unwrap()
}

#[test]
fn reduction_commutes_with_arithmetic() {
    for (p, n) in [(2u64, 6u32), (3, 4), (5, 3)] {
        let m = p.pow(n);
        for x in 0..m {
            for y in 0..m {
                let (a, b) = (z(p, n, x), z(p, n, y));
                for k in 1..=n {
                    let (ak, bk) = (a.reduce(k).unwrap(), b.reduce(k).unwrap());
                    assert_eq!(a.add(&b).unwrap().reduce(k).unwrap(), ak.add(&bk).unwrap());
                    assert_eq!(a.mul(&b).unwrap().reduce(k).unwrap(), ak.mul(&bk).unwrap());
                }
            }
        }
    }
}

#[test]
fn extension_is_compatible_across_precisions() {
    let f = appendix_f(1023).unwrap();
    let sq = certify_table(FnTable::from_fn(Domain::N, 0, 300, |x| BigInt::from(x * x + 3 * x)).unwrap());
    for t in [&f, &sq] {
        for (p, n) in [(2u64, 8u32), (3, 5), (5, 3)] {
            for v in 0..p.pow(n) {
                let x = z(p, n, v);
                let top = cp_extend(t, &x).unwrap();
                for m in 1..n {
                    assert_eq!(top.reduce(m).unwrap(), cp_extend(t, &x.reduce(m).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn monomial_preimages_stay_in_the_lattice() {
    for (p, n) in [(2u64, 3u32), (3, 2), (5, 1), (2, 4)] {
        let m = p.pow(n);
        for g in 1u32..(1 << m.min(8)) {
            let res: Vec<u64> = (0..m).filter(|r| g >> r & 1 == 1).collect();
            let l = RecSetZp::new(p, n, &res).unwrap();
            let base = RecSet::Z(l.to_upsetz());
            let space = DuoSpace::new(&base, Domain::Z, Signature::AddMul).unwrap();
            let w = space.required_window() as i64;
            for (c, e) in [(1i64, 2u32), (2, 1), (3, 3), (1, 1)] {
                let f = FnTable::from_fn(Domain::Z, -w, w, |x| BigInt::from(c) * BigInt::from(x).pow(e)).unwrap();
                for kind in [ClosureKind::Lattice, ClosureKind::Boolean] {
                    assert!(space.check_finv_in(&f, kind).unwrap().is_matched(), "{l} c={c} e={e}");
                }
            }
        }
    }
}

fn nonzero() -> impl Strategy<Value = u64> {
    1u64..64
}

proptest! {
    #[test]
    fn divides_is_a_preorder(x in nonzero(), y in nonzero(), w in nonzero()) {
        let (a, b, c) = (z(2, 6, x), z(2, 6, y), z(2, 6, w));
        prop_assert_eq!(a.divides(&a).unwrap(), Divides::Yes);
        if a.divides(&b).unwrap() == Divides::Yes && b.divides(&c).unwrap() == Divides::Yes {
            prop_assert_eq!(a.divides(&c).unwrap(), Divides::Yes);
        }
    }

    #[test]
    fn divides_is_compatible_with_mul(x in nonzero(), y in nonzero(), w in nonzero()) {
        let (a, b, c) = (z(3, 5, x), z(3, 5, y), z(3, 5, w));
        if a.divides(&b).unwrap() == Divides::Yes {
            let (ac, bc) = (a.mul(&c).unwrap(), b.mul(&c).unwrap());
            prop_assert_ne!(ac.divides(&bc).unwrap(), Divides::No);
        }
    }

    #[test]
    fn unit_inverse(v in 0u64..3125) {
        let x = z(5, 5, v);
        match x.inverse() {
            Ok(inv) => prop_assert_eq!(x.mul(&inv).unwrap(), z(5, 5, 1)),
            Err(_) => prop_assert_eq!(v % 5, 0),
        }
    }

    #[test]
    fn set_preimages_commute_with_membership(g in 1u32..256, t in -50i64..50, c in -20i64..20, x in -500i64..500) {
        let res: Vec<u64> = (0..8).filter(|r| g >> r & 1 == 1).collect();
        let l = RecSetZp::new(2, 3, &res).unwrap();
        let x = BigInt::from(x);
        prop_assert_eq!(l.translate_preimage(&t.into()).member_int(&x), l.member_int(&(&x + t)));
        prop_assert_eq!(l.homothety_preimage(&c.into()).member_int(&x), l.member_int(&(&x * c)));
        prop_assert_eq!(l.complement().member_int(&x), !l.member_int(&x));
    }
}
