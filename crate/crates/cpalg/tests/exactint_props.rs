use cpalg::exactint::{crt_merge, lcm, lcm_upto_u64, valuation, ResidueConstraint};
use num_bigint::BigInt;
use proptest::prelude::*;

fn constraint() -> impl Strategy<Value = ResidueConstraint> {
    (-200i64..200, 1i64..40).prop_map(|(r, m)| ResidueConstraint::new(r.into(), m.into()).unwrap())
}

proptest! {
    #[test]
    fn merge_commutes(a in constraint(), b in constraint()) {
        prop_assert_eq!(crt_merge(&a, &b).ok(), crt_merge(&b, &a).ok());
    }

    #[test]
    fn merge_associates(a in constraint(), b in constraint(), c in constraint()) {
        let left = crt_merge(&a, &b).ok().and_then(|ab| crt_merge(&ab, &c).ok());
        let right = crt_merge(&b, &c).ok().and_then(|bc| crt_merge(&a, &bc).ok());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn merge_with_self(a in constraint()) {
        prop_assert_eq!(crt_merge(&a, &a).unwrap(), a);
    }

    #[test]
    fn merge_solutions_match_brute_force(a in constraint(), b in constraint()) {
        let l = lcm(a.modulus(), b.modulus());
        let sols: Vec<BigInt> = (0..l.clone().try_into().unwrap())
            .map(BigInt::from)
            .filter(|x: &BigInt| a.satisfied_by(x) && b.satisfied_by(x))
            .collect();
        match crt_merge(&a, &b) {
            Ok(c) => {
                prop_assert_eq!(c.modulus(), &l);
                prop_assert_eq!(sols, vec![c.residue().clone()]);
            }
            Err(_) => prop_assert!(sols.is_empty()),
        }
    }

    #[test]
    fn valuation_is_additive(x in 1i64..100_000, y in 1i64..100_000, p in prop::sample::select(vec![2i64, 3, 5, 7, 11])) {
        let p = BigInt::from(p);
        let vxy = valuation(&(BigInt::from(x) * y), &p).unwrap();
        prop_assert_eq!(vxy, valuation(&x.into(), &p).unwrap() + valuation(&y.into(), &p).unwrap());
    }
}

#[test]
fn lcm_upto_recurrence() {
    for x in 2..=200u64 {
        assert_eq!(lcm_upto_u64(x), lcm(&lcm_upto_u64(x - 1), &BigInt::from(x)), "x = {x}");
    }
}
