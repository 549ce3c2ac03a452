use cpalg::finalg::{all_partitions, BinRel, ClosureKind, FiniteAlgebra, Partition};
use proptest::prelude::*;

fn algebra(max_n: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let op = (1usize..=2).prop_flat_map(move |ar| {
                prop::collection::vec(0..n, n.pow(ar as u32)).prop_map(move |t| (ar, t))
            });
            (Just(n), prop::collection::vec(op, 1..=2))
        })
        .prop_map(|(n, ops)| {
            let mut a = FiniteAlgebra::new(n);
            for (ar, t) in ops {
                a.push_op(ar, t).unwrap();
            }
            a
        })
}

/// A random algebra with `ℤ/n` addition, relabelled by a permutation, as its first operation.
fn group_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                prop::option::of(prop::collection::vec(0..n, n)),
            )
        })
        .prop_map(|(n, perm, extra)| {
            let mut inv = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            let table = (0..n * n).map(|i| perm[(inv[i / n] + inv[i % n]) % n]).collect();
            let mut a = FiniteAlgebra::new(n).with_op(2, table).unwrap();
            if let Some(t) = extra {
                a.push_op(1, t).unwrap();
            }
            a
        })
}

fn subset_of(n: usize, bits: u32) -> Vec<bool> {
    (0..n).map(|x| bits >> x & 1 == 1).collect()
}

/// Compatibility of `rel` with every operation, tuple by tuple.
fn compatible(a: &FiniteAlgebra, rel: &BinRel) -> bool {
    let n = a.size();
    a.ops().iter().enumerate().all(|(k, o)| {
        let tuples: Vec<Vec<usize>> = (0..n.pow(o.arity as u32))
            .map(|c| (0..o.arity).rev().map(|j| c / n.pow(j as u32) % n).collect())
            .collect();
        tuples.iter().all(|xs| {
            tuples.iter().all(|ys| {
                !xs.iter().zip(ys).all(|(&x, &y)| rel.get(x, y)) || rel.get(a.apply(k, xs), a.apply(k, ys))
            })
        })
    })
}

fn preorders(n: usize) -> Vec<BinRel> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    (0u32..1 << off.len())
        .map(|m| {
            let mut r = BinRel::identity(n);
            for (i, &(x, y)) in off.iter().enumerate() {
                r.set(x, y, m >> i & 1 == 1);
            }
            r
        })
        .filter(BinRel::is_transitive)
        .collect()
}

fn down_closed(r: &BinRel, s: &[bool]) -> bool {
    r.pairs().iter().all(|&(x, y)| !s[y] || s[x])
}

/// Subsets of the closure expected from the syntactic relations alone.
fn expected_closure(a: &FiniteAlgebra, l: &[bool], kind: ClosureKind) -> Vec<Vec<bool>> {
    let n = a.size();
    let seeds: Vec<Vec<bool>> = a.duo_closure().iter().map(|g| (0..n).map(|x| l[g[x]]).collect()).collect();
    let covered: Vec<bool> = (0..n).map(|x| seeds.iter().any(|s| s[x])).collect();
    let common = (0..n).any(|x| seeds.iter().all(|s| s[x]));
    let cong = a.syntactic_congruence(l).unwrap();
    let pre = a.syntactic_preorder(l).unwrap();
    (0u32..1 << n)
        .map(|m| subset_of(n, m))
        .filter(|s| match kind {
            ClosureKind::Boolean => cong.saturates(s),
            ClosureKind::Lattice => {
                let empty = s.iter().all(|b| !b);
                down_closed(&pre, s) && (0..n).all(|x| !s[x] || covered[x]) && !(empty && common)
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn join_closure_matches_brute_force(a in algebra(5)) {
        prop_assert_eq!(a.all_congruences(), a.all_congruences_brute_force());
        let direct: Vec<Partition> = all_partitions(a.size()).into_iter().filter(|p| compatible(&a, &p.to_rel())).collect();
        prop_assert_eq!(a.all_congruences(), direct);
    }

    #[test]
    fn frozen_compatibility_is_full_compatibility(a in algebra(4)) {
        for p in all_partitions(a.size()) {
            prop_assert_eq!(a.is_congruence(&p), compatible(&a, &p.to_rel()));
        }
        for r in preorders(a.size()) {
            prop_assert_eq!(a.is_stable_preorder(&r), compatible(&a, &r));
        }
    }

    #[test]
    fn syntactic_congruence_is_coarsest(a in algebra(4), bits in any::<u32>()) {
        let l = subset_of(a.size(), bits);
        let syn = a.syntactic_congruence(&l).unwrap();
        prop_assert!(a.is_congruence(&syn) && syn.saturates(&l));
        for p in a.all_congruences() {
            if p.saturates(&l) {
                prop_assert!(p.refines(&syn), "{} does not refine {}", p, syn);
            }
        }
    }

    #[test]
    fn syntactic_preorder_is_coarsest(a in algebra(4), bits in any::<u32>()) {
        let l = subset_of(a.size(), bits);
        let syn = a.syntactic_preorder(&l).unwrap();
        prop_assert!(a.is_stable_preorder(&syn) && down_closed(&syn, &l));
        for r in a.all_stable_preorders().unwrap() {
            if down_closed(&r, &l) {
                prop_assert!(r.pairs().iter().all(|&(x, y)| syn.get(x, y)));
            }
        }
    }

    #[test]
    fn closures_are_saturated_sets_and_initial_segments(a in algebra(5), bits in any::<u32>()) {
        let l = subset_of(a.size(), bits);
        for kind in [ClosureKind::Boolean, ClosureKind::Lattice] {
            prop_assert_eq!(a.lattice_closure(&l, kind).unwrap(), expected_closure(&a, &l, kind));
        }
    }

    #[test]
    fn decompositions_equal_preimages(a in algebra(4), bits in any::<u32>(), f in prop::collection::vec(0usize..4, 4)) {
        let n = a.size();
        let l = subset_of(n, bits);
        let f: Vec<usize> = f[..n].iter().map(|&v| v % n).collect();
        let pre: Vec<bool> = (0..n).map(|x| l[f[x]]).collect();
        if a.preserves(&f, &a.syntactic_preorder(&l).unwrap()).unwrap() {
            prop_assert_eq!(a.decompose_preimage_lattice(&f, &l).unwrap(), pre.clone());
        }
        if a.preserves_partition(&f, &a.syntactic_congruence(&l).unwrap()).unwrap() {
            prop_assert_eq!(a.decompose_preimage_boolean(&f, &l).unwrap(), pre);
        }
    }

    #[test]
    fn quotient_maps_are_morphisms(a in algebra(4)) {
        for p in a.all_congruences() {
            let q = a.quotient(&p).unwrap();
            for (k, o) in a.ops().iter().enumerate() {
                let n = a.size();
                for c in 0..n.pow(o.arity as u32) {
                    let xs: Vec<usize> = (0..o.arity).rev().map(|j| c / n.pow(j as u32) % n).collect();
                    let img: Vec<usize> = xs.iter().map(|&x| p.class_of(x)).collect();
                    prop_assert_eq!(p.class_of(a.apply(k, &xs)), q.apply(k, &img));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn group_conditions_collapse(a in group_algebra(), fs in prop::collection::vec(prop::collection::vec(0usize..4, 4), 50)) {
        let n = a.size();
        prop_assert!(a.check_group_op(0).is_ok());
        let subsets: Vec<Vec<bool>> = (0u32..1 << n).map(|m| subset_of(n, m)).collect();
        for f in fs {
            let f: Vec<usize> = f[..n].iter().map(|&v| v % n).collect();
            let iii = a.preserves_all_congruences(&f).unwrap();
            let in_closure = |kind| {
                subsets.iter().all(|l| {
                    let pre: Vec<bool> = (0..n).map(|x| l[f[x]]).collect();
                    a.lattice_closure(l, kind).unwrap().contains(&pre)
                })
            };
            prop_assert_eq!(iii, in_closure(ClosureKind::Lattice));
            prop_assert_eq!(iii, in_closure(ClosureKind::Boolean));
        }
    }

    #[test]
    fn stable_preorders_of_groups_are_congruences(a in group_algebra()) {
        for r in a.all_stable_preorders().unwrap() {
            prop_assert!(r.is_symmetric());
        }
        let orders = a.stable_orders_of_group(0).unwrap();
        prop_assert_eq!(orders, vec![BinRel::identity(a.size())]);
    }
}
