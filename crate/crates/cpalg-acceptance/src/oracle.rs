//! Reference computations written straight from the definitions, sharing no
//! code with the library beyond its public types.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Canonical image of `x` in the frying pan with tail `a` and cycle `k`.
pub fn phi(a: u64, k: u64, x: u64) -> u64 {
    if x < a {
        x
    } else {
        a + (x - a) % k
    }
}

/// Elements whose additive orbit `{j·g : j >= 0}` is the whole monoid.
pub fn generators(a: u64, k: u64) -> BTreeSet<u64> {
    let size = a + k;
    (0..size)
        .filter(|&g| {
            let orbit: BTreeSet<u64> = (0..=2 * size).map(|j| phi(a, k, j * g)).collect();
            orbit.len() as u64 == size
        })
        .collect()
}

pub fn totient(k: u64) -> u64 {
    (1..=k).filter(|&i| i.gcd(&k) == 1).count() as u64
}

/// `x ~_{a,k} y` on ℕ.
pub fn nak(a: i64, k: i64, x: i64, y: i64) -> bool {
    x == y || (x >= a && y >= a && (x - y).rem_euclid(k) == 0)
}

/// Does `vals` (on `0..len`) preserve every `~_{a,k}` with `a + k <= s`?
pub fn preserves_all_nak(vals: &[i64], s: i64) -> bool {
    for a in 0..s {
        for k in 1..=s - a {
            for x in 0..vals.len() {
                for y in 0..x {
                    if nak(a, k, x as i64, y as i64) && !nak(a, k, vals[x], vals[y]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// First pair `x > y` with `(x - y) ∤ (v[x] - v[y])`, by brute force.
pub fn divisibility_failure(v: &[BigInt]) -> Option<(usize, usize)> {
    for x in 0..v.len() {
        for y in 0..x {
            if !((&v[x] - &v[y]) % BigInt::from(x - y)).is_zero() {
                return Some((x, y));
            }
        }
    }
    None
}

/// `{x : a·x ∈ l}` for a finite set of positive integers.
pub fn divide(l: &BTreeSet<u64>, a: u64) -> BTreeSet<u64> {
    l.iter().filter(|&&y| y % a == 0).map(|&y| y / a).collect()
}

/// Closure of `{L/a : a >= 1}` under binary union and intersection.
pub fn divisor_lattice(l: &BTreeSet<u64>) -> BTreeSet<BTreeSet<u64>> {
    let top = l.iter().max().copied().unwrap_or(0);
    let mut fam: BTreeSet<BTreeSet<u64>> = (1..=top + 1).map(|a| divide(l, a)).collect();
    loop {
        let items: Vec<BTreeSet<u64>> = fam.iter().cloned().collect();
        let before = fam.len();
        for s in &items {
            for t in &items {
                fam.insert(s.union(t).copied().collect());
                fam.insert(s.intersection(t).copied().collect());
            }
        }
        if fam.len() == before {
            return fam;
        }
    }
}

fn lcm_1_to(n: u64) -> BigInt {
    (1..=n.max(1)).fold(BigInt::one(), |acc, i| acc.lcm(&BigInt::from(i)))
}

/// The alternating sum driving the non-monotone example.
pub fn zigzag(x: u64) -> BigInt {
    let mut s = BigInt::zero();
    for y in (0..=x).step_by(2) {
        s += lcm_1_to(y + 2) * BigInt::from(2).pow(y as u32 + 2);
    }
    for z in (1..=x).step_by(2) {
        s -= lcm_1_to(z) * BigInt::from(2).pow(z as u32);
    }
    s
}

/// `(g, u, v)` with `u·a + v·b = g`.
fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        return (a.clone(), BigInt::one(), BigInt::zero());
    }
    let (q, r) = a.div_rem(b);
    let (g, u, v) = egcd(b, &r);
    (g, v.clone(), u - q * v)
}

/// Merge `x ≡ r1 (m1)` with `x ≡ r2 (m2)`; `None` if incompatible.
fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    let (g, u, _) = egcd(m1, m2);
    let d = r2 - r1;
    if !(&d % &g).is_zero() {
        return None;
    }
    let l = m1 / &g * m2;
    let r = (r1 + m1 * (d / &g * u)).mod_floor(&l);
    Some((r, l))
}

/// F on `0..=x_max`: every earlier value constrains `F(x) mod (x - i)`,
/// plus `F(2ⁿ - 1) ≡ 0 (mod 2ⁿ)`; the least solution `>= x` is taken.
pub fn appendix_f(x_max: u64) -> Vec<BigInt> {
    let mut f: Vec<BigInt> = vec![0.into(), 2.into(), 2.into()];
    for x in 3..=x_max {
        let (mut r, mut m) = (BigInt::zero(), BigInt::one());
        for i in 0..x - 1 {
            let (r2, m2) = (f[i as usize].clone(), BigInt::from(x - i));
            (r, m) = crt(&r, &m, &r2, &m2).expect("compatible constraints");
        }
        if (x + 1).is_power_of_two() {
            (r, m) = crt(&r, &m, &BigInt::zero(), &BigInt::from(x + 1)).expect("compatible constraints");
        }
        let x_big = BigInt::from(x);
        let v = &x_big + (&r - &x_big).mod_floor(&m);
        debug_assert!(!v.is_negative());
        f.push(v);
    }
    f.truncate(x_max as usize + 1);
    f
}

/// Partitions of `0..n` as class labels.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        let max = cur.iter().max().map_or(0, |m| m + 1);
        for c in 0..=max {
            cur.push(c);
            rec(i + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// A table-driven operation: arity and row-major values.
pub type Op = (usize, Vec<usize>);

fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    (0..n.pow(arity as u32))
        .map(|c| (0..arity).rev().map(|j| c / n.pow(j as u32) % n).collect())
        .collect()
}

fn eval(n: usize, op: &Op, xs: &[usize]) -> usize {
    op.1[xs.iter().fold(0, |acc, &x| acc * n + x)]
}

/// Is `rel(x, y)` compatible with every operation?
pub fn compatible(n: usize, ops: &[Op], rel: &dyn Fn(usize, usize) -> bool) -> bool {
    ops.iter().all(|op| {
        let ts = tuples(n, op.0);
        ts.iter().all(|xs| {
            ts.iter().all(|ys| !xs.iter().zip(ys).all(|(&x, &y)| rel(x, y)) || rel(eval(n, op, xs), eval(n, op, ys)))
        })
    })
}

/// Congruences by filtering all partitions.
pub fn congruences(n: usize, ops: &[Op]) -> Vec<Vec<usize>> {
    partitions(n).into_iter().filter(|p| compatible(n, ops, &|x, y| p[x] == p[y])).collect()
}

/// Unary maps reachable from the identity by composing with frozen operations.
pub fn translations(n: usize, ops: &[Op]) -> BTreeSet<Vec<usize>> {
    let mut frozen: Vec<Vec<usize>> = Vec::new();
    for op in ops {
        for pos in 0..op.0 {
            for consts in tuples(n, op.0 - 1) {
                frozen.push(
                    (0..n)
                        .map(|x| {
                            let mut args = consts.clone();
                            args.insert(pos, x);
                            eval(n, op, &args)
                        })
                        .collect(),
                );
            }
        }
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut todo = vec![(0..n).collect::<Vec<usize>>()];
    while let Some(g) = todo.pop() {
        if seen.insert(g.clone()) {
            for f in &frozen {
                todo.push(g.iter().map(|&x| f[x]).collect());
            }
        }
    }
    seen
}
