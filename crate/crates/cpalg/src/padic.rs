//! p-adic integers at finite precision, recognizable sets `F + pⁿℤ_p`,
//! the divisibility test for CP functions on residues, and the extension
//! of a CP function on ℕ to ℤ_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactint::{is_prime_u64, mod_inverse};
use crate::exotic::CPWitnessTable;
use crate::natint::Domain;
use crate::recsets::UPSetZ;

/// Largest `pⁿ` for which residue tables are built.
pub const MAX_TABLE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicApprox {
    p: u64,
    n: u32,
    value: BigInt,
}

/// p-adic valuation as far as the precision can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Valuation {
    Exact(u32),
    /// residue 0: the valuation is at least the precision
    AtLeast(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Divides {
    Yes,
    No,
    /// both sides vanish at this precision
    Inconclusive,
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(())
}

fn modulus(p: u64, n: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), n as usize)
}

impl PAdicApprox {
    pub fn new(p: u64, n: u32, value: &BigInt) -> Result<Self> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::Domain("precision must be >= 1".into()));
        }
        Ok(PAdicApprox { p, n, value: value.mod_floor(&modulus(p, n)) })
    }

    pub fn from_i64(p: u64, n: u32, v: i64) -> Result<Self> {
        Self::new(p, n, &BigInt::from(v))
    }

    /// From base-p digits, least significant first.
    pub fn from_digits(p: u64, digits: &[u64]) -> Result<Self> {
        if digits.iter().any(|&d| d >= p) {
            return Err(Error::Input(format!("digit out of range for p = {p}")));
        }
        let v = digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * p + d);
        Self::new(p, digits.len() as u32, &v)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> BigInt {
        modulus(self.p, self.n)
    }

    /// Base-p digits, least significant first, exactly `n` of them.
    pub fn digits(&self) -> Vec<u64> {
        let mut v = self.value.clone();
        let p = BigInt::from(self.p);
        (0..self.n)
            .map(|_| {
                let (q, r) = v.div_mod_floor(&p);
                v = q;
                r.to_u64().unwrap()
            })
            .collect()
    }

    pub fn digit_string(&self) -> String {
        let ds = self.digits();
        if self.p <= 10 {
            ds.iter().map(|d| d.to_string()).collect()
        } else {
            ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    /// Image in `ℤ/p^m` for `m <= n`.
    pub fn reduce(&self, m: u32) -> Result<Self> {
        if m == 0 || m > self.n {
            return Err(Error::Domain(format!("cannot reduce precision {} to {m}", self.n)));
        }
        if let (Some(q), Some(v)) = (self.p.checked_pow(m), self.value.to_u64()) {
            return Ok(PAdicApprox { p: self.p, n: m, value: BigInt::from(v % q) });
        }
        Ok(self.reduced(m, self.value.clone()))
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.n != other.n {
            return Err(Error::Domain(format!(
                "mismatched parameters (p={}, n={}) vs (p={}, n={})",
                self.p, self.n, other.p, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binop(other, |a, b, m| (a + b) % m, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binop(other, |a, b, m| (a + m - b) % m, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binop(other, |a, b, m| a * b % m, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        self.reduced(self.n, -&self.value)
    }

    /// `pⁿ` when it fits a machine word.
    fn small_modulus(&self) -> Option<u64> {
        self.p.checked_pow(self.n)
    }

    fn reduced(&self, n: u32, v: BigInt) -> Self {
        PAdicApprox { p: self.p, n, value: v.mod_floor(&modulus(self.p, n)) }
    }

    fn binop(
        &self,
        other: &Self,
        small: impl Fn(u128, u128, u128) -> u128,
        big: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<Self> {
        self.same(other)?;
        if let (Some(m), Some(a), Some(b)) = (self.small_modulus(), self.value.to_u64(), other.value.to_u64()) {
            let v = small(a as u128, b as u128, m as u128) as u64;
            return Ok(PAdicApprox { p: self.p, n: self.n, value: BigInt::from(v) });
        }
        Ok(self.reduced(self.n, big(&self.value, &other.value)))
    }

    pub fn valuation(&self) -> Valuation {
        if self.value.is_zero() {
            return Valuation::AtLeast(self.n);
        }
        let p = BigInt::from(self.p);
        let mut v = self.value.clone();
        let mut k = 0;
        while v.is_multiple_of(&p) {
            v /= &p;
            k += 1;
        }
        Valuation::Exact(k)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Exact(0)
    }

    pub fn inverse(&self) -> Result<Self> {
        match self.valuation() {
            Valuation::Exact(0) => {
                let inv = mod_inverse(&self.value, &self.modulus()).expect("units are invertible");
                Self::new(self.p, self.n, &inv)
            }
            v => Err(Error::Domain(format!("{} is not a unit (valuation {v:?})", self.value))),
        }
    }

    /// `self | other` in ℤ_p, read off the valuations.
    pub fn divides(&self, other: &Self) -> Result<Divides> {
        self.same(other)?;
        Ok(match (self.valuation(), other.valuation()) {
            (Valuation::Exact(a), Valuation::Exact(b)) => {
                if a <= b {
                    Divides::Yes
                } else {
                    Divides::No
                }
            }
            (Valuation::Exact(_), Valuation::AtLeast(_)) => Divides::Yes,
            (Valuation::AtLeast(_), Valuation::Exact(_)) => Divides::No,
            (Valuation::AtLeast(_), Valuation::AtLeast(_)) => Divides::Inconclusive,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "value": crate::bigjson::to_value(&self.value),
            "digits": self.digit_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v["p"].as_u64().ok_or_else(|| Error::Input("missing p".into()))?;
        let n = v["n"].as_u64().ok_or_else(|| Error::Input("missing n".into()))?;
        let n = u32::try_from(n).map_err(|_| Error::Input("precision too large".into()))?;
        let value = crate::bigjson::from_value(&v["value"]).map_err(Error::Input)?;
        Self::new(p, n, &value)
    }
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.p, self.n)
    }
}

impl Serialize for PAdicApprox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicApprox {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        PAdicApprox::from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ZpVerdict {
    ConsistentCp,
    /// `x - y` does not divide `f(x) - f(y)` in ℤ_p
    Refuted { x: u64, y: u64, fx: u64, fy: u64 },
}

fn table_size(p: u64, n: u32) -> Result<u64> {
    check_prime(p)?;
    p.checked_pow(n)
        .filter(|&m| m <= MAX_TABLE)
        .ok_or_else(|| Error::Bound(format!("{p}^{n} exceeds {MAX_TABLE}")))
}

/// Divisibility test on every pair of residues mod `pⁿ`.
pub fn check_cp_zp(p: u64, n: u32, f: &[u64]) -> Result<ZpVerdict> {
    let m = table_size(p, n)?;
    if f.len() as u64 != m {
        return Err(Error::Input(format!("table needs {m} entries, got {}", f.len())));
    }
    let val = |mut d: u64| -> u32 {
        if d == 0 {
            return n;
        }
        let mut k = 0;
        while d.is_multiple_of(p) {
            d /= p;
            k += 1;
        }
        k
    };
    for x in 0..m {
        for y in 0..x {
            let dx = x - y;
            let df = (f[x as usize] % m + m - f[y as usize] % m) % m;
            if val(dx) > val(df) {
                return Ok(ZpVerdict::Refuted { x, y, fx: f[x as usize], fy: f[y as usize] });
            }
        }
    }
    Ok(ZpVerdict::ConsistentCp)
}

/// `f̂(x) mod pⁿ = f(x_n) mod pⁿ` for the least window point `x_n ≡ x`.
pub fn cp_extend(f: &CPWitnessTable, x: &PAdicApprox) -> Result<PAdicApprox> {
    if !f.divisibility_verified {
        return Err(Error::Precondition("the table is not certified pairwise divisible".into()));
    }
    let t = &f.table;
    if t.domain() == Domain::Z {
        return Err(Error::Precondition("expected a table on ℕ".into()));
    }
    let m = x.modulus();
    let lo = BigInt::from(t.lo());
    // least representative >= lo
    let gap: BigInt = (&lo - &x.value).max(BigInt::zero());
    let rep: BigInt = &x.value + (gap + &m - 1u32) / &m * &m;
    let idx = rep.to_i64().filter(|&r| t.contains(r));
    match idx {
        Some(r) => PAdicApprox::new(x.p, x.n, t.get(r).unwrap()),
        None => Err(Error::Window {
            reason: format!("no representative of {x} in {}..={}", t.lo(), t.hi()),
            required: rep.to_u64().map_or(u64::MAX, |r| r + 1),
        }),
    }
}

/// `F + pⁿℤ_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecSetZp {
    p: u64,
    n: u32,
    f: Vec<bool>,
}

impl RecSetZp {
    pub fn new(p: u64, n: u32, residues: &[u64]) -> Result<Self> {
        let m = table_size(p, n)?;
        let mut f = vec![false; m as usize];
        for &r in residues {
            f[(r % m) as usize] = true;
        }
        Ok(RecSetZp { p, n, f })
    }

    fn from_flags(p: u64, n: u32, f: Vec<bool>) -> Self {
        RecSetZp { p, n, f }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    fn m(&self) -> u64 {
        self.f.len() as u64
    }

    pub fn residues(&self) -> Vec<u64> {
        (0..self.m()).filter(|&r| self.f[r as usize]).collect()
    }

    /// Membership of an element known to precision at least `n`.
    pub fn member(&self, x: &PAdicApprox) -> Result<bool> {
        if x.p != self.p || x.n < self.n {
            return Err(Error::Domain("element precision is below the set's".into()));
        }
        Ok(self.f[x.value.mod_floor(&BigInt::from(self.m())).to_usize().unwrap()])
    }

    pub fn member_int(&self, x: &BigInt) -> bool {
        self.f[x.mod_floor(&BigInt::from(self.m())).to_usize().unwrap()]
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.n != other.n {
            return Err(Error::Domain("mismatched (p, n)".into()));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(Self::from_flags(self.p, self.n, self.f.iter().zip(&other.f).map(|(a, b)| *a || *b).collect()))
    }

    pub fn inter(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(Self::from_flags(self.p, self.n, self.f.iter().zip(&other.f).map(|(a, b)| *a && *b).collect()))
    }

    pub fn complement(&self) -> Self {
        Self::from_flags(self.p, self.n, self.f.iter().map(|b| !b).collect())
    }

    /// `{x : x + t ∈ L}`.
    pub fn translate_preimage(&self, t: &BigInt) -> Self {
        let m = self.m();
        let s = t.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        Self::from_flags(self.p, self.n, (0..m).map(|r| self.f[((r + s) % m) as usize]).collect())
    }

    /// `{x : c·x ∈ L}`.
    pub fn homothety_preimage(&self, c: &BigInt) -> Self {
        let m = self.m();
        let s = c.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        Self::from_flags(
            self.p,
            self.n,
            (0..m).map(|r| self.f[((r as u128 * s as u128) % m as u128) as usize]).collect(),
        )
    }

    /// The trace on ℤ, `F + pⁿℤ`.
    pub fn to_upsetz(&self) -> UPSetZ {
        UPSetZ::new(self.f.len(), self.f.clone()).expect("valid residues")
    }
}

impl fmt::Display for RecSetZp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<String> = self.residues().iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}+{}^{}ℤ_{}", rs.join(","), self.p, self.n, self.p)
    }
}

/// `x^e` at the precision of `x`.
pub fn pow(x: &PAdicApprox, e: u32) -> PAdicApprox {
    let m = x.modulus();
    PAdicApprox::new(x.p, x.n, &x.value.modpow(&BigInt::from(e), &m)).unwrap()
}

/// Convenience: the element `-1` at precision `n`.
pub fn minus_one(p: u64, n: u32) -> Result<PAdicApprox> {
    PAdicApprox::new(p, n, &-BigInt::one())
}
