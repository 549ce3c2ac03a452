//! Congruences on ℕ and ℤ, function tables on finite windows, and
//! window-bounded checks of congruence and stable-preorder preservation.
//!
//! Every positive verdict means "no counterexample inside the window".

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Domain of a function table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    /// ℕ = {0, 1, ...}
    N,
    /// ℤ
    Z,
    /// ℕ \ {0}
    Nx,
}

impl Domain {
    pub fn min(self) -> Option<i64> {
        match self {
            Domain::N => Some(0),
            Domain::Nx => Some(1),
            Domain::Z => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CongruenceSpec {
    Equality,
    /// x ~ y iff x = y, or x, y >= a and x ≡ y (mod k).
    Nak { a: u64, k: u64 },
    /// x ≡ y (mod k).
    Zmod { k: u64 },
}

impl CongruenceSpec {
    pub fn nak(a: u64, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("Nak needs k >= 1".into()));
        }
        Ok(CongruenceSpec::Nak { a, k })
    }

    pub fn zmod(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("Zmod needs k >= 1".into()));
        }
        Ok(CongruenceSpec::Zmod { k })
    }

    /// Number of classes, if finite.
    pub fn index(&self) -> Option<u64> {
        match *self {
            CongruenceSpec::Equality => None,
            CongruenceSpec::Nak { a, k } => Some(a + k),
            CongruenceSpec::Zmod { k } => Some(k),
        }
    }

    pub fn related(&self, x: &BigInt, y: &BigInt) -> Result<bool> {
        match *self {
            CongruenceSpec::Equality => Ok(x == y),
            CongruenceSpec::Zmod { k } => Ok((x - y).is_multiple_of(&BigInt::from(k))),
            CongruenceSpec::Nak { a, k } => {
                if x.is_negative() || y.is_negative() {
                    return Err(Error::Domain(format!(
                        "Nak({a},{k}) is a congruence on ℕ; got {x}, {y}"
                    )));
                }
                if x == y {
                    return Ok(true);
                }
                let a = BigInt::from(a);
                Ok(x >= &a && y >= &a && (x - y).is_multiple_of(&BigInt::from(k)))
            }
        }
    }
}

impl fmt::Display for CongruenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceSpec::Equality => write!(f, "equality"),
            CongruenceSpec::Nak { a, k } => write!(f, "Nak({a},{k})"),
            CongruenceSpec::Zmod { k } => write!(f, "Zmod({k})"),
        }
    }
}

/// A function given by its values on the window `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct FnTable {
    domain: Domain,
    lo: i64,
    values: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    domain: Domain,
    lo: i64,
    hi: i64,
    #[serde(with = "crate::bigjson::many")]
    values: Vec<BigInt>,
}

impl TryFrom<RawTable> for FnTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        if raw.hi.checked_sub(raw.lo).and_then(|d| d.checked_add(1)) != Some(raw.values.len() as i64) {
            return Err(Error::Input(format!(
                "window {}..={} does not match {} values",
                raw.lo,
                raw.hi,
                raw.values.len()
            )));
        }
        FnTable::new(raw.domain, raw.lo, raw.values)
    }
}

impl From<FnTable> for RawTable {
    fn from(t: FnTable) -> Self {
        RawTable { domain: t.domain, lo: t.lo, hi: t.hi(), values: t.values }
    }
}

impl FnTable {
    pub fn new(domain: Domain, lo: i64, values: Vec<BigInt>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("empty window".into()));
        }
        if let Some(min) = domain.min() {
            if lo < min {
                return Err(Error::Domain(format!("window starts at {lo}, below the domain")));
            }
        }
        Ok(FnTable { domain, lo, values })
    }

    /// Tabulate `f` on `lo..=hi`.
    pub fn from_fn(domain: Domain, lo: i64, hi: i64, f: impl Fn(i64) -> BigInt) -> Result<Self> {
        if hi < lo {
            return Err(Error::Domain(format!("empty window {lo}..={hi}")));
        }
        FnTable::new(domain, lo, (lo..=hi).map(f).collect())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi()
    }

    pub fn get(&self, x: i64) -> Option<&BigInt> {
        if self.contains(x) {
            Some(&self.values[(x - self.lo) as usize])
        } else {
            None
        }
    }

    /// Window points paired with their values.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        (self.lo..).zip(self.values.iter())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tables serialize")
    }
}

/// Evidence attached to a refutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `x - y` does not divide `f(x) - f(y)`.
    Divisibility {
        x: i64,
        y: i64,
        #[serde(with = "crate::bigjson::one")]
        fx: BigInt,
        #[serde(with = "crate::bigjson::one")]
        fy: BigInt,
    },
    /// Non-constant on the window yet `f(x) < x`.
    BelowDiagonal {
        x: i64,
        #[serde(with = "crate::bigjson::one")]
        fx: BigInt,
    },
    /// `f(x) < f(x - 1)`.
    Decreasing {
        x: i64,
        #[serde(with = "crate::bigjson::one")]
        prev: BigInt,
        #[serde(with = "crate::bigjson::one")]
        fx: BigInt,
    },
    /// `f(x)` differs from `c * x^n`.
    NotMonomial {
        x: i64,
        #[serde(with = "crate::bigjson::one")]
        fx: BigInt,
        reason: String,
    },
    /// `x ~ y` but `f(x)` and `f(y)` are not related.
    Congruence { congruence: CongruenceSpec, x: i64, y: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    ConsistentCp,
    ConsistentSpp,
    Monomial {
        #[serde(with = "crate::bigjson::one")]
        c: BigInt,
        n: u32,
    },
    Preserved,
    Refuted { witness: Witness },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    fn refuted(witness: Witness) -> Self {
        Verdict::Refuted { witness }
    }
}

/// First pair (x ascending, then y ascending below x) with
/// `(x - y) ∤ (f(x) - f(y))`.
pub fn first_divisibility_failure(f: &FnTable) -> Option<Witness> {
    let vals = f.values();
    for i in 0..vals.len() {
        for j in 0..i {
            let d = BigInt::from(i - j);
            if !(&vals[i] - &vals[j]).is_multiple_of(&d) {
                return Some(Witness::Divisibility {
                    x: f.lo + i as i64,
                    y: f.lo + j as i64,
                    fx: vals[i].clone(),
                    fy: vals[j].clone(),
                });
            }
        }
    }
    None
}

/// Divisibility on every pair, plus, on ℕ, "constant or f(x) >= x".
pub fn check_cp_additive(f: &FnTable) -> Verdict {
    if let Some(w) = first_divisibility_failure(f) {
        return Verdict::refuted(w);
    }
    if f.domain != Domain::Z {
        let constant = f.values.iter().all(|v| v == &f.values[0]);
        if !constant {
            for (x, fx) in f.iter() {
                if fx < &BigInt::from(x) {
                    return Verdict::refuted(Witness::BelowDiagonal { x, fx: fx.clone() });
                }
            }
        }
    }
    Verdict::ConsistentCp
}

/// CP as above and nondecreasing.
pub fn check_spp_additive(f: &FnTable) -> Verdict {
    match check_cp_additive(f) {
        Verdict::ConsistentCp => {}
        other => return other,
    }
    for (i, w) in f.values.windows(2).enumerate() {
        if w[1] < w[0] {
            return Verdict::refuted(Witness::Decreasing {
                x: f.lo + i as i64 + 1,
                prev: w[0].clone(),
                fx: w[1].clone(),
            });
        }
    }
    Verdict::ConsistentSpp
}

/// Exact `n` with `base^n == q`, if any (`base >= 2`).
fn exact_log(q: &BigInt, base: i64) -> Option<u32> {
    if !q.is_positive() {
        return None;
    }
    let b = BigInt::from(base);
    let mut n = 0;
    let mut r = q.clone();
    while !r.is_one() {
        let (d, m) = r.div_rem(&b);
        if !m.is_zero() {
            return None;
        }
        r = d;
        n += 1;
    }
    Some(n)
}

/// Fit `f(x) = f(1) * x^n` on a window of ℕ \ {0}.
pub fn check_cp_multiplicative(f: &FnTable) -> Result<Verdict> {
    let c = f
        .get(1)
        .ok_or_else(|| Error::Domain("window must contain 1".into()))?
        .clone();
    if f.lo < 1 || f.hi() < 2 {
        return Err(Error::Domain("window must lie in ℕ\\{0} and reach 2".into()));
    }
    let x0 = f.lo.max(2);
    let f0 = f.get(x0).expect("x0 in window");
    let n = if c.is_zero() {
        0
    } else {
        let (q, r) = f0.div_rem(&c);
        let fitted = if r.is_zero() { exact_log(&q, x0) } else { None };
        match fitted {
            Some(n) => n,
            None => {
                return Ok(Verdict::refuted(Witness::NotMonomial {
                    x: x0,
                    fx: f0.clone(),
                    reason: format!("f({x0}) / f(1) is not a power of {x0}"),
                }))
            }
        }
    };
    for (x, fx) in f.iter() {
        let expect = &c * num_traits::pow(BigInt::from(x), n as usize);
        if fx != &expect {
            return Ok(Verdict::refuted(Witness::NotMonomial {
                x,
                fx: fx.clone(),
                reason: format!("expected {c} * {x}^{n} = {expect}"),
            }));
        }
    }
    Ok(Verdict::Monomial { c, n })
}

/// Directly test `x ~ y ⇒ f(x) ~ f(y)` for every listed congruence and
/// every window pair.
pub fn brute_force_preserves(f: &FnTable, congs: &[CongruenceSpec]) -> Result<Verdict> {
    for &cong in congs {
        for (x, fx) in f.iter() {
            for (y, fy) in f.iter().take_while(|(y, _)| *y < x) {
                let xb = BigInt::from(x);
                let yb = BigInt::from(y);
                if cong.related(&xb, &yb)? && !cong.related(fx, fy)? {
                    return Ok(Verdict::refuted(Witness::Congruence { congruence: cong, x, y }));
                }
            }
        }
    }
    Ok(Verdict::Preserved)
}

/// Tabulate `g` on `lo..=hi` over `domain` from word-size values.
pub fn table_from_i64(domain: Domain, lo: i64, vals: &[i64]) -> Result<FnTable> {
    FnTable::new(domain, lo, vals.iter().map(|&v| BigInt::from(v)).collect())
}

/// Classes of a congruence met by `0..n` (counted on representatives).
pub fn classes_on_prefix(c: &CongruenceSpec, n: u64) -> Result<usize> {
    let mut reps: Vec<BigInt> = Vec::new();
    for x in 0..n {
        let x = BigInt::from(x);
        let mut fresh = true;
        for r in &reps {
            if c.related(&x, r)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(x);
        }
    }
    Ok(reps.len())
}
