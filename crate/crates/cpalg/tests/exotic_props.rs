use cpalg::exactint::lcm_upto_u64;
use cpalg::exotic::{appendix_f, certify_pairwise, cp_window_lift, floor_e_factorial};
use cpalg::natint::{check_cp_additive, table_from_i64, Domain, FnTable, Verdict};
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_stays_in_bracket(target in prop::collection::vec(0i64..100_000, 1..14)) {
        let t = table_from_i64(Domain::N, 0, &target).unwrap();
        let w = cp_window_lift(&t).unwrap();
        prop_assert!(w.divisibility_verified);
        prop_assert_eq!(w.window_bound, Some(true));
        for (x, (g, f)) in w.values().iter().zip(t.values()).enumerate() {
            prop_assert!(g <= f);
            prop_assert!(f - g < lcm_upto_u64(x.max(1) as u64));
        }
        prop_assert!(certify_pairwise(w.values()).is_ok());
        prop_assert_eq!(cp_window_lift(&t).unwrap(), w);
    }
}

#[test]
fn e_factorial_is_cp() {
    let t = FnTable::from_fn(Domain::N, 0, 25, |x| floor_e_factorial(x as u64)).unwrap();
    assert!(certify_pairwise(t.values()).is_ok());
    assert!(t.iter().all(|(x, v)| v >= &BigInt::from(x)));
    assert_eq!(check_cp_additive(&t), Verdict::ConsistentCp);
}

#[test]
fn appendix_invariants() {
    let w = appendix_f(511).unwrap();
    assert_eq!(check_cp_additive(&w.table), Verdict::ConsistentCp);
    for n in 1..=9u32 {
        let x = (1usize << n) - 1;
        assert_eq!(&w.values()[x] % (1u64 << n), BigInt::from(0), "n = {n}");
    }
}
