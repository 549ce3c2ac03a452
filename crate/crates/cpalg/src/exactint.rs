//! Exact integer helpers: gcd, cumulative lcm, CRT merging, totient and
//! p-adic valuation. Everything is on [`BigInt`] unless a fast path is
//! obviously safe.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Nonnegative gcd; `gcd(0, 0) == 0`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// lcm(1, ..., x).
pub fn lcm_upto(x: &BigInt) -> Result<BigInt> {
    if x < &BigInt::one() {
        return Err(Error::Domain(format!("lcm_upto needs x >= 1, got {x}")));
    }
    let n = x
        .to_u64()
        .ok_or_else(|| Error::Bound(format!("lcm_upto argument {x} too large")))?;
    Ok(lcm_upto_u64(n))
}

/// lcm(1, ..., n) with lcm_upto_u64(0) = 1 (empty product).
pub fn lcm_upto_u64(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for p in primes_upto(n) {
        let mut q = p;
        while q <= n / p {
            q *= p;
        }
        acc *= q;
    }
    acc
}

/// Euclidean residue in `0..m` for `m > 0`.
pub fn mod_floor(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// Inverse of `a` modulo `m` (`m >= 1`), if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// `x ≡ r (mod m)` with `0 <= r < m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueConstraint {
    r: BigInt,
    m: BigInt,
}

impl ResidueConstraint {
    pub fn new(r: BigInt, m: BigInt) -> Result<Self> {
        if m < BigInt::one() {
            return Err(Error::Domain(format!("modulus must be >= 1, got {m}")));
        }
        Ok(ResidueConstraint { r: r.mod_floor(&m), m })
    }

    /// The constraint satisfied by every integer.
    pub fn trivial() -> Self {
        ResidueConstraint { r: BigInt::zero(), m: BigInt::one() }
    }

    pub fn residue(&self) -> &BigInt {
        &self.r
    }

    pub fn modulus(&self) -> &BigInt {
        &self.m
    }

    pub fn satisfied_by(&self, x: &BigInt) -> bool {
        x.mod_floor(&self.m) == self.r
    }

    /// Largest solution `<= bound`.
    pub fn largest_at_most(&self, bound: &BigInt) -> BigInt {
        bound - (bound - &self.r).mod_floor(&self.m)
    }

    /// Smallest solution `>= bound`.
    pub fn smallest_at_least(&self, bound: &BigInt) -> BigInt {
        bound + (&self.r - bound).mod_floor(&self.m)
    }
}

impl fmt::Display for ResidueConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.r, self.m)
    }
}

/// Two constraints with no common solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incompatible {
    pub left: ResidueConstraint,
    pub right: ResidueConstraint,
}

impl fmt::Display for Incompatible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "incompatible: ({}) and ({})", self.left, self.right)
    }
}

/// Merge two congruences into one modulo lcm(m1, m2).
pub fn crt_merge(
    c1: &ResidueConstraint,
    c2: &ResidueConstraint,
) -> std::result::Result<ResidueConstraint, Incompatible> {
    let g = c1.m.gcd(&c2.m);
    let diff = &c2.r - &c1.r;
    if !diff.is_multiple_of(&g) {
        return Err(Incompatible { left: c1.clone(), right: c2.clone() });
    }
    let m1g = &c1.m / &g;
    let m2g = &c2.m / &g;
    let l = &m1g * &c2.m;
    // m1g and m2g are coprime, so the inverse exists.
    let inv = mod_inverse(&m1g, &m2g).expect("coprime after dividing by gcd");
    let t = ((diff / &g) * inv).mod_floor(&m2g);
    let r = (&c1.r + &c1.m * t).mod_floor(&l);
    Ok(ResidueConstraint { r, m: l })
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(k: &BigInt) -> Result<BigInt> {
    if k < &BigInt::one() {
        return Err(Error::Domain(format!("euler_phi needs k >= 1, got {k}")));
    }
    let mut n = k.clone();
    let mut phi = k.clone();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            while n.is_multiple_of(&d) {
                n /= &d;
            }
            phi = phi / &d * (&d - 1u32);
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        phi = &phi / &n * (&n - 1u32);
    }
    Ok(phi)
}

pub fn euler_phi_u64(k: u64) -> u64 {
    assert!(k >= 1);
    let (mut n, mut phi, mut d) = (k, k, 2u64);
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            phi = phi / d * (d - 1);
        }
        d += 1;
    }
    if n > 1 {
        phi = phi / n * (n - 1);
    }
    phi
}

pub fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn is_prime_big(p: &BigInt) -> bool {
    if let Some(small) = p.to_u64() {
        return is_prime_u64(small);
    }
    if p.is_negative() {
        return false;
    }
    let mut d = BigInt::from(2u32);
    while &d * &d <= *p {
        if p.is_multiple_of(&d) {
            return false;
        }
        d += 1u32;
    }
    true
}

/// max{n : p^n | x}.
pub fn valuation(x: &BigInt, p: &BigInt) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::Domain("valuation of 0 is infinite".into()));
    }
    if !is_prime_big(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(p);
        if !r.is_zero() {
            return Ok(v);
        }
        y = q;
        v += 1;
    }
}

/// Primes `<= n`, ascending (sieve of Eratosthenes).
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Inverse of `a` modulo `m` for word-size moduli.
pub(crate) fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn rc(r: i64, m: i64) -> ResidueConstraint {
        ResidueConstraint::new(b(r), b(m)).unwrap()
    }

    // Oracle: smallest x in 0..bound satisfying both, by scanning.
    fn scan(c1: (i64, i64), c2: (i64, i64)) -> Option<i64> {
        let l = num_integer::lcm(c1.1, c2.1);
        (0..l).find(|x| x.rem_euclid(c1.1) == c1.0.rem_euclid(c1.1) && x.rem_euclid(c2.1) == c2.0.rem_euclid(c2.1))
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&b(12), &b(18)), b(6));
        assert_eq!(gcd(&b(0), &b(5)), b(5));
        assert_eq!(gcd(&b(0), &b(0)), b(0));
        let two40 = BigInt::one() << 40u32;
        let three20 = BigInt::from(3u32).pow(20u32);
        assert_eq!(gcd(&two40, &three20), b(1));
    }

    #[test]
    fn lcm_upto_examples() {
        assert_eq!(lcm_upto(&b(1)).unwrap(), b(1));
        assert_eq!(lcm_upto(&b(6)).unwrap(), b(60));
        assert_eq!(lcm_upto(&b(10)).unwrap(), b(2520));
        assert!(matches!(lcm_upto(&b(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(scan((2, 3), (3, 5)), Some(8));
        assert_eq!(crt_merge(&rc(2, 3), &rc(3, 5)).unwrap(), rc(8, 15));
        assert!(crt_merge(&rc(1, 2), &rc(0, 2)).is_err());
        assert_eq!(crt_merge(&rc(0, 1), &rc(4, 7)).unwrap(), rc(4, 7));
    }

    #[test]
    fn crt_agrees_with_scan() {
        for m1 in 1..13 {
            for m2 in 1..13 {
                for r1 in 0..m1 {
                    for r2 in 0..m2 {
                        let got = crt_merge(&rc(r1, m1), &rc(r2, m2));
                        match scan((r1, m1), (r2, m2)) {
                            Some(x) => assert_eq!(got.unwrap(), rc(x, num_integer::lcm(m1, m2))),
                            None => assert!(got.is_err()),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(&b(1)).unwrap(), b(1));
        assert_eq!(euler_phi(&b(12)).unwrap(), b(4));
        assert_eq!(euler_phi(&b(97)).unwrap(), b(96));
        for k in 1..200i64 {
            let count = (1..=k).filter(|j| num_integer::gcd(*j, k) == 1).count() as i64;
            assert_eq!(euler_phi(&b(k)).unwrap(), b(count));
            assert_eq!(euler_phi_u64(k as u64) as i64, count);
        }
        assert!(euler_phi(&b(0)).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&b(8), &b(2)).unwrap(), 3);
        assert_eq!(valuation(&b(12), &b(2)).unwrap(), 2);
        assert_eq!(valuation(&b(7), &b(3)).unwrap(), 0);
        assert_eq!(valuation(&b(-18), &b(3)).unwrap(), 2);
        assert!(valuation(&b(0), &b(2)).is_err());
        assert!(valuation(&b(8), &b(4)).is_err());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieve = primes_upto(500);
        let trial: Vec<u64> = (0..=500).filter(|&p| is_prime_u64(p)).collect();
        assert_eq!(sieve, trial);
    }

    #[test]
    fn small_inverse() {
        for m in 1..60u64 {
            for a in 0..m {
                let expect = (0..m).find(|y| (a * y) % m == 1 % m);
                assert_eq!(mod_inverse_u64(a, m), expect);
            }
        }
    }
}
