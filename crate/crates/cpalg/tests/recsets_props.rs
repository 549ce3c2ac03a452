use cpalg::recsets::{Carrier, RecSet, UPSetN, UPSetZ};
use num_bigint::BigInt;
use proptest::prelude::*;

/// `(a, k, F, R)` as plain flags.
fn params() -> impl Strategy<Value = (usize, usize, Vec<bool>, Vec<bool>)> {
    (0usize..10, 1usize..10).prop_flat_map(|(a, k)| {
        (Just(a), Just(k), prop::collection::vec(any::<bool>(), a), prop::collection::vec(any::<bool>(), k))
    })
}

fn formula(a: usize, k: usize, f: &[bool], r: &[bool], x: usize) -> bool {
    if x < a {
        f[x]
    } else {
        r[(x - a) % k]
    }
}

fn build(p: &(usize, usize, Vec<bool>, Vec<bool>)) -> UPSetN {
    UPSetN::new(p.0, p.1, p.2.clone(), p.3.clone()).unwrap()
}

fn zset() -> impl Strategy<Value = UPSetZ> {
    (1usize..13).prop_flat_map(|k| prop::collection::vec(any::<bool>(), k).prop_map(move |g| UPSetZ::new(k, g).unwrap()))
}

proptest! {
    #[test]
    fn membership_follows_definition(p in params()) {
        let s = build(&p);
        for x in 0..=p.0 + 4 * p.1 {
            prop_assert_eq!(s.contains(x), formula(p.0, p.1, &p.2, &p.3, x), "x = {}", x);
            prop_assert_eq!(s.member(&BigInt::from(x)).unwrap(), s.contains(x));
        }
    }

    #[test]
    fn normalize_is_idempotent(p in params()) {
        let s = build(&p);
        let n = s.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert_eq!(n.indicator(p.0 + 4 * p.1 + 1), s.indicator(p.0 + 4 * p.1 + 1));
        prop_assert_eq!(n.syntactic_index(), (n.a(), n.k()));
    }

    #[test]
    fn boolean_ops_pointwise(p in params(), q in params()) {
        let (s, t) = (build(&p), build(&q));
        let (u, i, c) = (s.union(&t).unwrap(), s.inter(&t).unwrap(), s.complement());
        for x in 0..120 {
            prop_assert_eq!(u.contains(x), s.contains(x) || t.contains(x));
            prop_assert_eq!(i.contains(x), s.contains(x) && t.contains(x));
            prop_assert_eq!(c.contains(x), !s.contains(x));
        }
    }

    #[test]
    fn preimages_commute_with_membership(p in params(), n in 0u64..40, m in 1u64..40) {
        let s = build(&p);
        let tr = s.translate_preimage(&BigInt::from(n)).unwrap();
        let dv = s.division_preimage(&BigInt::from(m)).unwrap();
        for x in 0..=p.0 + 4 * p.1 {
            prop_assert_eq!(tr.contains(x), s.contains(x + n as usize));
            prop_assert_eq!(dv.contains(x), s.contains(x * m as usize));
        }
    }

    #[test]
    fn z_preimages_commute_with_membership(s in zset(), n in -60i64..60, m in -30i64..30) {
        let tr = s.translate_preimage(&BigInt::from(n));
        let ho = s.homothety_preimage(&BigInt::from(m));
        for x in -50i64..50 {
            prop_assert_eq!(tr.contains_i64(x), s.contains_i64(x + n));
            prop_assert_eq!(ho.contains_i64(x), s.contains_i64(x * m));
        }
        prop_assert_eq!(s.normalize().normalize(), s.normalize());
    }

    #[test]
    fn json_round_trip(p in params(), z in zset()) {
        for s in [RecSet::N(build(&p)), RecSet::Z(z)] {
            let back = RecSet::from_json(&s.to_json(), None).unwrap();
            prop_assert!(back.equals(&s).unwrap());
            prop_assert_eq!(back.carrier(), s.carrier());
        }
    }
}

#[test]
fn carrier_mismatch_is_rejected() {
    let n = RecSet::N(UPSetN::progression(6, 10).unwrap());
    let z = RecSet::Z(UPSetZ::residues(10, &[6]).unwrap());
    assert!(n.union(&z).is_err());
    assert_eq!(z.carrier(), Carrier::Z);
}
