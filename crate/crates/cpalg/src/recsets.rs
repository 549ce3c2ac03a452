//! Recognizable subsets of ℕ and ℤ as ultimately periodic sets.
//!
//! `UPSetN` is `F ∪ ((a + R) + kℕ)` with `F ⊆ {0..a-1}`, `R ⊆ {0..k-1}`;
//! `UPSetZ` is `G + kℤ`. Both are kept normalized.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;

use crate::error::{Error, Result};

/// Largest period or threshold accepted when aligning or constructing.
pub const MAX_PARAM: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPSetN {
    a: usize,
    k: usize,
    f: Vec<bool>,
    r: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPSetZ {
    k: usize,
    g: Vec<bool>,
}

/// `pos ∪ (-neg)` for ultimately periodic `pos`, `neg ⊆ ℕ`. Regular but in
/// general not recognizable in ⟨ℤ;+⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegSetZ {
    pub pos: UPSetN,
    pub neg: UPSetN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Carrier {
    N,
    Z,
}

/// A recognizable set on either carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RecSet {
    N(UPSetN),
    Z(UPSetZ),
}

fn check_param(name: &str, v: usize) -> Result<()> {
    if v > MAX_PARAM {
        return Err(Error::Bound(format!("{name} = {v} exceeds {MAX_PARAM}")));
    }
    Ok(())
}

fn lcm_checked(a: usize, b: usize) -> Result<usize> {
    let l = a.lcm(&b);
    check_param("period", l)?;
    Ok(l)
}

fn bigint_mod(x: &BigInt, k: usize) -> usize {
    x.mod_floor(&BigInt::from(k)).to_usize().expect("residue fits")
}

/// Smallest divisor `d` of `pat.len()` such that `pat` is `d`-periodic.
fn min_period(pat: &[bool]) -> usize {
    let k = pat.len();
    (1..=k)
        .filter(|d| k.is_multiple_of(*d))
        .find(|&d| (0..k).all(|i| pat[i] == pat[i % d]))
        .unwrap_or(k)
}

impl UPSetN {
    /// From bit flags; normalizes.
    pub fn new(a: usize, k: usize, f: Vec<bool>, r: Vec<bool>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("period k must be >= 1".into()));
        }
        check_param("a", a)?;
        check_param("k", k)?;
        if f.len() != a || r.len() != k {
            return Err(Error::Input(format!(
                "F needs {a} flags and R needs {k}, got {} and {}",
                f.len(),
                r.len()
            )));
        }
        Ok(UPSetN { a, k, f, r }.normalized())
    }

    /// From element lists: `F` holds elements below `a`, `R` holds offsets below `k`.
    pub fn from_lists(a: usize, k: usize, f: &[u64], r: &[u64]) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("period k must be >= 1".into()));
        }
        check_param("a", a)?;
        check_param("k", k)?;
        let mut fv = vec![false; a];
        for &x in f {
            let i = x as usize;
            if i >= a {
                return Err(Error::Input(format!("F element {x} is not below a = {a}")));
            }
            fv[i] = true;
        }
        let mut rv = vec![false; k];
        for &x in r {
            let i = x as usize;
            if i >= k {
                return Err(Error::Input(format!("R offset {x} is not below k = {k}")));
            }
            rv[i] = true;
        }
        Self::new(a, k, fv, rv)
    }

    pub fn empty() -> Self {
        UPSetN { a: 0, k: 1, f: vec![], r: vec![false] }
    }

    pub fn full() -> Self {
        UPSetN { a: 0, k: 1, f: vec![], r: vec![true] }
    }

    pub fn finite(elems: &[u64]) -> Result<Self> {
        let a = elems.iter().max().map_or(0, |&m| m as usize + 1);
        Self::from_lists(a, 1, elems, &[])
    }

    /// `start + kℕ`.
    pub fn progression(start: u64, k: usize) -> Result<Self> {
        Self::from_lists(start as usize, k, &[], &[0])
    }

    /// Tabulate a predicate with threshold `a` and period `k`.
    pub fn from_predicate(a: usize, k: usize, p: impl Fn(usize) -> bool) -> Result<Self> {
        check_param("a", a)?;
        check_param("k", k)?;
        let f = (0..a).map(&p).collect();
        let r = (0..k).map(|i| p(a + i)).collect();
        Self::new(a, k, f, r)
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn f_flags(&self) -> &[bool] {
        &self.f
    }

    pub fn r_flags(&self) -> &[bool] {
        &self.r
    }

    pub fn f_elems(&self) -> Vec<u64> {
        (0..self.a).filter(|&i| self.f[i]).map(|i| i as u64).collect()
    }

    pub fn r_offsets(&self) -> Vec<u64> {
        (0..self.k).filter(|&i| self.r[i]).map(|i| i as u64).collect()
    }

    pub fn contains(&self, x: usize) -> bool {
        if x < self.a {
            self.f[x]
        } else {
            self.r[(x - self.a) % self.k]
        }
    }

    pub fn member(&self, x: &BigInt) -> Result<bool> {
        if x.is_negative() {
            return Err(Error::Domain(format!("{x} is not in ℕ")));
        }
        match x.to_usize() {
            Some(v) if v < self.a => Ok(self.f[v]),
            _ => {
                let off = x - BigInt::from(self.a);
                Ok(self.r[bigint_mod(&off, self.k)])
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.r.iter().all(|&b| !b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.f.iter().all(|&b| !b)
    }

    /// Largest element of a finite set.
    pub fn max_elem(&self) -> Option<usize> {
        if !self.is_finite() {
            return None;
        }
        (0..self.a).rev().find(|&i| self.f[i])
    }

    /// Membership flags of `0..n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        (0..n).map(|x| self.contains(x)).collect()
    }

    /// Least threshold, then least period.
    pub fn normalize(&self) -> Self {
        self.clone().normalized()
    }

    fn normalized(mut self) -> Self {
        let d = min_period(&self.r);
        self.r.truncate(d);
        self.k = d;
        while self.a > 0 && self.f[self.a - 1] == self.r[self.k - 1] {
            self.a -= 1;
            let v = self.f.pop().unwrap();
            self.r.rotate_right(1);
            self.r[0] = v;
        }
        self
    }

    /// Same set written with threshold `a2 >= a` and period a multiple of `k`.
    fn aligned(&self, a2: usize, k2: usize) -> (Vec<bool>, Vec<bool>) {
        debug_assert!(a2 >= self.a && k2.is_multiple_of(self.k));
        ((0..a2).map(|x| self.contains(x)).collect(), (0..k2).map(|i| self.contains(a2 + i)).collect())
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        let a = self.a.max(other.a);
        let k = lcm_checked(self.k, other.k)?;
        let (f1, r1) = self.aligned(a, k);
        let (f2, r2) = other.aligned(a, k);
        let f = f1.iter().zip(&f2).map(|(&x, &y)| op(x, y)).collect();
        let r = r1.iter().zip(&r2).map(|(&x, &y)| op(x, y)).collect();
        Ok(UPSetN { a, k, f, r }.normalized())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x || y)
    }

    pub fn inter(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x && y)
    }

    pub fn complement(&self) -> Self {
        UPSetN {
            a: self.a,
            k: self.k,
            f: self.f.iter().map(|b| !b).collect(),
            r: self.r.iter().map(|b| !b).collect(),
        }
    }

    /// `{x : x + n ∈ self}`.
    pub fn translate_preimage(&self, n: &BigInt) -> Result<Self> {
        if n.is_negative() {
            return Err(Error::Domain("translation on ℕ needs n >= 0".into()));
        }
        Self::from_predicate(self.a, self.k, |x| self.member(&(n + x)).expect("nonnegative"))
    }

    /// `{x : n·x ∈ self}` for `n >= 1`. Threshold `a` and period `k` still work
    /// since `n·x >= x`.
    pub fn division_preimage(&self, n: &BigInt) -> Result<Self> {
        if !n.is_positive() {
            return Err(Error::Domain("division needs n >= 1".into()));
        }
        Self::from_predicate(self.a, self.k, |x| self.member(&(n * x)).expect("nonnegative"))
    }

    /// Parameters of the coarsest `~_{a,k}` saturating the set.
    pub fn syntactic_index(&self) -> (usize, usize) {
        let n = self.normalize();
        (n.a, n.k)
    }
}

impl fmt::Display for UPSetN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fe = self.f_elems();
        let ro: Vec<u64> = self.r_offsets().iter().map(|o| o + self.a as u64).collect();
        let list = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match (fe.is_empty(), ro.is_empty()) {
            (true, true) => write!(f, "∅"),
            (false, true) => write!(f, "{{{}}}", list(&fe)),
            (true, false) => write!(f, "{{{}}}+{}ℕ", list(&ro), self.k),
            (false, false) => write!(f, "{{{}}} ∪ {{{}}}+{}ℕ", list(&fe), list(&ro), self.k),
        }
    }
}

impl UPSetZ {
    pub fn new(k: usize, g: Vec<bool>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("period k must be >= 1".into()));
        }
        check_param("k", k)?;
        if g.len() != k {
            return Err(Error::Input(format!("G needs {k} flags, got {}", g.len())));
        }
        Ok(UPSetZ { k, g }.normalized())
    }

    /// `G + kℤ`; residues are reduced mod `k`.
    pub fn residues(k: usize, g: &[i64]) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("period k must be >= 1".into()));
        }
        check_param("k", k)?;
        let mut v = vec![false; k];
        for &x in g {
            v[x.rem_euclid(k as i64) as usize] = true;
        }
        Self::new(k, v)
    }

    pub fn from_predicate(k: usize, p: impl Fn(usize) -> bool) -> Result<Self> {
        Self::new(k, (0..k).map(p).collect())
    }

    pub fn empty() -> Self {
        UPSetZ { k: 1, g: vec![false] }
    }

    pub fn full() -> Self {
        UPSetZ { k: 1, g: vec![true] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn flags(&self) -> &[bool] {
        &self.g
    }

    pub fn residue_list(&self) -> Vec<u64> {
        (0..self.k).filter(|&i| self.g[i]).map(|i| i as u64).collect()
    }

    pub fn contains_residue(&self, r: usize) -> bool {
        self.g[r % self.k]
    }

    pub fn member(&self, x: &BigInt) -> bool {
        self.g[bigint_mod(x, self.k)]
    }

    pub fn contains_i64(&self, x: i64) -> bool {
        self.g[x.rem_euclid(self.k as i64) as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.g.iter().all(|&b| !b)
    }

    pub fn normalize(&self) -> Self {
        self.clone().normalized()
    }

    fn normalized(mut self) -> Self {
        let d = min_period(&self.g);
        self.g.truncate(d);
        self.k = d;
        self
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        let k = lcm_checked(self.k, other.k)?;
        Self::from_predicate(k, |i| op(self.contains_residue(i), other.contains_residue(i)))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x || y)
    }

    pub fn inter(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x && y)
    }

    pub fn complement(&self) -> Self {
        UPSetZ { k: self.k, g: self.g.iter().map(|b| !b).collect() }
    }

    /// `{x : x + n ∈ self}`.
    pub fn translate_preimage(&self, n: &BigInt) -> Self {
        let s = bigint_mod(n, self.k);
        UPSetZ { k: self.k, g: (0..self.k).map(|i| self.g[(i + s) % self.k]).collect() }.normalized()
    }

    /// `{x : n·x ∈ self}` for `n >= 1`.
    pub fn division_preimage(&self, n: &BigInt) -> Result<Self> {
        if !n.is_positive() {
            return Err(Error::Domain("division needs n >= 1".into()));
        }
        Ok(self.homothety_preimage(n))
    }

    /// `{x : n·x ∈ self}` for any integer `n`.
    pub fn homothety_preimage(&self, n: &BigInt) -> Self {
        let m = bigint_mod(n, self.k);
        UPSetZ { k: self.k, g: (0..self.k).map(|i| self.g[i * m % self.k]).collect() }.normalized()
    }
}

impl fmt::Display for UPSetZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let rs: Vec<String> = self.residue_list().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}+{}ℤ", rs.join(","), self.k)
    }
}

impl RegSetZ {
    pub fn new(pos: UPSetN, neg: UPSetN) -> Self {
        RegSetZ { pos, neg }
    }

    pub fn member(&self, x: &BigInt) -> bool {
        if x.is_negative() {
            self.neg.member(&-x).expect("nonnegative")
        } else {
            self.pos.member(x).expect("nonnegative")
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        Ok(RegSetZ { pos: self.pos.union(&other.pos)?, neg: self.neg.union(&other.neg)? })
    }

    /// `{-x : x ∈ self}`. Zero stays where it is.
    pub fn mirror(&self) -> Self {
        let zero_in = self.pos.contains(0);
        let mut pos = self.neg.clone();
        let mut neg = self.pos.clone();
        if self.neg.contains(0) != zero_in {
            let fix = |s: &UPSetN, v: bool| {
                UPSetN::from_predicate(s.a.max(1), s.k, |x| if x == 0 { v } else { s.contains(x) }).unwrap()
            };
            pos = fix(&pos, zero_in);
            neg = fix(&neg, zero_in);
        }
        RegSetZ { pos, neg }
    }

    /// Members inside `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&x| self.member(&BigInt::from(x))).collect()
    }
}

impl RecSet {
    pub fn carrier(&self) -> Carrier {
        match self {
            RecSet::N(_) => Carrier::N,
            RecSet::Z(_) => Carrier::Z,
        }
    }

    pub fn member(&self, x: &BigInt) -> Result<bool> {
        match self {
            RecSet::N(s) => s.member(x),
            RecSet::Z(s) => Ok(s.member(x)),
        }
    }

    fn mixed() -> Error {
        Error::Domain("operands live on different carriers".into())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (RecSet::N(x), RecSet::N(y)) => Ok(RecSet::N(x.union(y)?)),
            (RecSet::Z(x), RecSet::Z(y)) => Ok(RecSet::Z(x.union(y)?)),
            _ => Err(Self::mixed()),
        }
    }

    pub fn inter(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (RecSet::N(x), RecSet::N(y)) => Ok(RecSet::N(x.inter(y)?)),
            (RecSet::Z(x), RecSet::Z(y)) => Ok(RecSet::Z(x.inter(y)?)),
            _ => Err(Self::mixed()),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            RecSet::N(x) => RecSet::N(x.complement()),
            RecSet::Z(x) => RecSet::Z(x.complement()),
        }
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        match (self, other) {
            (RecSet::N(x), RecSet::N(y)) => Ok(x.normalize() == y.normalize()),
            (RecSet::Z(x), RecSet::Z(y)) => Ok(x.normalize() == y.normalize()),
            _ => Err(Self::mixed()),
        }
    }

    pub fn translate_preimage(&self, n: &BigInt) -> Result<Self> {
        match self {
            RecSet::N(x) => Ok(RecSet::N(x.translate_preimage(n)?)),
            RecSet::Z(x) => Ok(RecSet::Z(x.translate_preimage(n))),
        }
    }

    pub fn division_preimage(&self, n: &BigInt) -> Result<Self> {
        match self {
            RecSet::N(x) => Ok(RecSet::N(x.division_preimage(n)?)),
            RecSet::Z(x) => Ok(RecSet::Z(x.division_preimage(n)?)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RecSet::N(s) => serde_json::json!({
                "carrier": "N", "a": s.a, "k": s.k, "F": s.f_elems(), "R": s.r_offsets()
            }),
            RecSet::Z(s) => serde_json::json!({
                "carrier": "Z", "k": s.k, "G": s.residue_list()
            }),
        }
    }

    /// Parse the JSON form. The carrier is taken from `"carrier"`, else
    /// from `default`, else inferred (`"G"` means ℤ).
    pub fn from_json(v: &Value, default: Option<Carrier>) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Input("set must be a JSON object".into()))?;
        let carrier = match obj.get("carrier").and_then(Value::as_str) {
            Some("N") => Carrier::N,
            Some("Z") => Carrier::Z,
            Some(other) => return Err(Error::Input(format!("unknown carrier {other:?}"))),
            None => {
                let n_keys = ["a", "F", "R"].iter().any(|k| obj.contains_key(*k));
                match (n_keys, obj.contains_key("G")) {
                    (true, true) => return Err(Error::Input("set mixes ℕ keys (a, F, R) with the ℤ key G".into())),
                    (false, true) => Carrier::Z,
                    (true, false) => Carrier::N,
                    (false, false) => default.unwrap_or(Carrier::N),
                }
            }
        };
        let num = |key: &str, dflt: Option<u64>| -> Result<usize> {
            match obj.get(key) {
                Some(x) => x
                    .as_u64()
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::Input(format!("{key} must be a nonnegative integer"))),
                None => dflt.map(|d| d as usize).ok_or_else(|| Error::Input(format!("missing {key}"))),
            }
        };
        let list = |key: &str| -> Result<Vec<i64>> {
            match obj.get(key) {
                None => Ok(vec![]),
                Some(Value::Array(xs)) => xs
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| Error::Input(format!("{key} entries must be integers"))))
                    .collect(),
                Some(_) => Err(Error::Input(format!("{key} must be an array"))),
            }
        };
        match carrier {
            Carrier::N => {
                let a = num("a", Some(0))?;
                let k = num("k", None)?;
                let to_u = |xs: Vec<i64>| -> Result<Vec<u64>> {
                    xs.into_iter()
                        .map(|x| u64::try_from(x).map_err(|_| Error::Input("negative entry".into())))
                        .collect()
                };
                Ok(RecSet::N(UPSetN::from_lists(a, k, &to_u(list("F")?)?, &to_u(list("R")?)?)?))
            }
            Carrier::Z => {
                let k = num("k", None)?;
                let g = list("G")?;
                if g.iter().any(|&x| x < 0 || x as usize >= k) {
                    return Err(Error::Input(format!("G entries must lie in 0..{k}")));
                }
                Ok(RecSet::Z(UPSetZ::residues(k, &g)?))
            }
        }
    }
}

impl fmt::Display for RecSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecSet::N(s) => s.fmt(f),
            RecSet::Z(s) => s.fmt(f),
        }
    }
}

impl Serialize for RecSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RecSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        RecSet::from_json(&v, None).map_err(serde::de::Error::custom)
    }
}
