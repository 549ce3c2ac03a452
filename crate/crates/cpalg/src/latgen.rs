//! Lattices and Boolean algebras generated by the DUO preimages of a
//! recognizable set, over ⟨ℕ;+⟩, ⟨ℕ;×⟩, ⟨ℕ\{0};×⟩, ⟨ℤ;+⟩ and the
//! semirings ⟨ℕ;+,×⟩, ⟨ℤ;+,×⟩.
//!
//! Sets are handled as bitmasks over the classes of `~_{a,k}` (or residues
//! mod `k` on ℤ) where `(a, k)` are the normalized parameters of `L`. These
//! "cells" refine every relation that matters here, so each generator
//! `γ⁻¹(L)` is a union of cells.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::finalg::ClosureKind;
use crate::natint::{Domain, FnTable};
use crate::recsets::{RecSet, RegSetZ, UPSetN, UPSetZ};

/// Largest number of cells (masks are `u128`).
pub const MAX_CELLS: usize = 128;

/// Default cap on enumerated family members.
pub const MEMBER_CAP: usize = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "x")]
    Mul,
    #[serde(rename = "+,x")]
    AddMul,
}

impl std::str::FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace(' ', "").as_str() {
            "+" | "add" => Ok(Signature::Add),
            "x" | "×" | "*" | "mul" => Ok(Signature::Mul),
            "+,x" | "+,×" | "+,*" | "x,+" | "×,+" | "addmul" => Ok(Signature::AddMul),
            other => Err(Error::Input(format!("unknown signature {other:?}"))),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::Add => "+",
            Signature::Mul => "×",
            Signature::AddMul => "+,×",
        })
    }
}

/// A derived unary operation, named by the preimage it produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Generator {
    /// `x ↦ x + t`, preimage `L - t`.
    Translate { t: i64 },
    /// `x ↦ m·x`, preimage `L/m`.
    Homothety { m: i64 },
    /// `x ↦ m·x + t`, preimage `(L - t)/m`.
    Affine { m: i64, t: i64 },
}

impl Generator {
    pub fn apply(&self, x: i64) -> i64 {
        match *self {
            Generator::Translate { t } => x + t,
            Generator::Homothety { m } => m * x,
            Generator::Affine { m, t } => m * x + t,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Translate { t: 0 } => write!(f, "L"),
            Generator::Translate { t } => write!(f, "L-{t}"),
            Generator::Homothety { m: 1 } => write!(f, "L"),
            Generator::Homothety { m } => write!(f, "L/{m}"),
            Generator::Affine { m: 1, t: 0 } => write!(f, "L"),
            Generator::Affine { m: 1, t } => write!(f, "L-{t}"),
            Generator::Affine { m, t: 0 } => write!(f, "L/{m}"),
            Generator::Affine { m, t } => write!(f, "(L-{t})/{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Literal {
    pub gen: Generator,
    pub positive: bool,
}

/// Union of intersections of generator preimages (or their complements).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dnf {
    pub terms: Vec<Vec<Literal>>,
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "∅");
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let lits: Vec<String> = t
                    .iter()
                    .map(|l| if l.positive { l.gen.to_string() } else { format!("∁({})", l.gen) })
                    .collect();
                if lits.len() > 1 && self.terms.len() > 1 {
                    format!("({})", lits.join(" ∩ "))
                } else {
                    lits.join(" ∩ ")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" ∪ "))
    }
}

#[derive(Debug, Clone)]
struct Seed {
    gen: Generator,
    mask: u128,
}

/// The cells, generators and syntactic relations of one `(L, signature)`.
#[derive(Debug, Clone)]
pub struct DuoSpace {
    base: RecSet,
    domain: Domain,
    signature: Signature,
    a: usize,
    k: usize,
    reps: Vec<i64>,
    seeds: Vec<Seed>,
    /// per cell, which seeds contain it (bit i = seed i)
    sig: Vec<Vec<bool>>,
    /// syntactic class of each cell, classes numbered by first cell
    class: Vec<usize>,
}

fn bit(i: usize) -> u128 {
    1u128 << i
}

fn mask_iter(m: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&i| m >> i & 1 == 1)
}

impl DuoSpace {
    /// `domain` selects the carrier: `N`, `Nx` (ℕ\{0}, × only) or `Z`.
    pub fn new(base: &RecSet, domain: Domain, signature: Signature) -> Result<Self> {
        let (a, k) = match (base, domain) {
            (RecSet::N(s), Domain::N) => (s.a(), s.k()),
            (RecSet::N(s), Domain::Nx) => {
                if signature != Signature::Mul {
                    return Err(Error::Domain("ℕ\\{0} is only handled with ×".into()));
                }
                if s.contains(0) {
                    return Err(Error::Domain("a subset of ℕ\\{0} cannot contain 0".into()));
                }
                (s.a(), s.k())
            }
            (RecSet::Z(s), Domain::Z) => (0, s.k()),
            _ => return Err(Error::Domain("set and carrier do not match".into())),
        };
        let reps: Vec<i64> = match domain {
            Domain::N | Domain::Z => (0..(a + k) as i64).collect(),
            Domain::Nx if a >= 1 => (1..(a + k) as i64).collect(),
            Domain::Nx => (0..k as i64).map(|i| if i == 0 { k as i64 } else { i }).collect(),
        };
        if reps.len() > MAX_CELLS {
            return Err(Error::Bound(format!(
                "{} cells exceed the limit of {MAX_CELLS}",
                reps.len()
            )));
        }
        let span = match domain {
            Domain::Z => k as i64,
            _ => (a + k) as i64,
        };
        let gens: Vec<Generator> = match (signature, domain) {
            (Signature::Add, _) => (0..span).map(|t| Generator::Translate { t }).collect(),
            (Signature::Mul, Domain::Nx) => (1..=span).map(|m| Generator::Homothety { m }).collect(),
            (Signature::Mul, _) => (0..span).map(|m| Generator::Homothety { m }).collect(),
            (Signature::AddMul, _) => (0..span)
                .flat_map(|m| (0..span).map(move |t| Generator::Affine { m, t }))
                .collect(),
        };
        let mut space = DuoSpace {
            base: base.clone(),
            domain,
            signature,
            a,
            k,
            reps,
            seeds: Vec::new(),
            sig: Vec::new(),
            class: Vec::new(),
        };
        let mut seen = std::collections::HashSet::new();
        // identity first so that L itself is labelled plainly
        let id = match signature {
            Signature::Add => Generator::Translate { t: 0 },
            Signature::Mul => Generator::Homothety { m: 1 },
            Signature::AddMul => Generator::Affine { m: 1, t: 0 },
        };
        for g in std::iter::once(id).chain(gens) {
            let mask = space.preimage_mask(&g);
            if seen.insert(mask) {
                space.seeds.push(Seed { gen: g, mask });
            }
        }
        let n = space.reps.len();
        space.sig = (0..n)
            .map(|c| space.seeds.iter().map(|s| s.mask >> c & 1 == 1).collect())
            .collect();
        let mut labels: Vec<usize> = Vec::with_capacity(n);
        let mut firsts: Vec<usize> = Vec::new();
        for c in 0..n {
            match firsts.iter().position(|&d| space.sig[d] == space.sig[c]) {
                Some(i) => labels.push(i),
                None => {
                    labels.push(firsts.len());
                    firsts.push(c);
                }
            }
        }
        space.class = labels;
        Ok(space)
    }

    fn in_base(&self, y: i64) -> bool {
        match &self.base {
            RecSet::N(s) => y >= 0 && s.contains(y as usize),
            RecSet::Z(s) => s.contains_i64(y),
        }
    }

    fn preimage_mask(&self, g: &Generator) -> u128 {
        self.reps
            .iter()
            .enumerate()
            .filter(|(_, &x)| self.in_base(g.apply(x)))
            .fold(0, |m, (i, _)| m | bit(i))
    }

    pub fn base(&self) -> &RecSet {
        &self.base
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn num_cells(&self) -> usize {
        self.reps.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class.iter().max().map_or(0, |m| m + 1)
    }

    /// Distinct generator preimages, identity first.
    pub fn generators(&self) -> Vec<Generator> {
        self.seeds.iter().map(|s| s.gen).collect()
    }

    pub fn generator_sets(&self) -> Vec<RecSet> {
        self.seeds.iter().map(|s| self.mask_to_set(s.mask)).collect()
    }

    fn full_mask(&self) -> u128 {
        if self.reps.len() == 128 {
            u128::MAX
        } else {
            bit(self.reps.len()) - 1
        }
    }

    /// Cell of a carrier element, `None` outside the carrier.
    pub fn cell_of(&self, x: &BigInt) -> Option<usize> {
        match self.domain {
            Domain::Z => Some(x.mod_floor(&BigInt::from(self.k)).to_usize().unwrap()),
            Domain::N | Domain::Nx => {
                if x.is_negative() || (self.domain == Domain::Nx && x.to_u64() == Some(0)) {
                    return None;
                }
                let c = match x.to_usize() {
                    Some(v) if v < self.a => v,
                    _ => self.a + (x - BigInt::from(self.a)).mod_floor(&BigInt::from(self.k)).to_usize().unwrap(),
                };
                if self.domain == Domain::Nx && self.a >= 1 {
                    Some(c - 1)
                } else {
                    Some(c)
                }
            }
        }
    }

    fn cell_of_i64(&self, x: i64) -> Option<usize> {
        self.cell_of(&BigInt::from(x))
    }

    pub fn mask_to_set(&self, m: u128) -> RecSet {
        match self.domain {
            Domain::Z => RecSet::Z(UPSetZ::from_predicate(self.k, |x| m >> x & 1 == 1).unwrap()),
            Domain::N | Domain::Nx => {
                let a = if self.domain == Domain::Nx { self.a.max(1) } else { self.a };
                RecSet::N(
                    UPSetN::from_predicate(a, self.k, |x| {
                        self.cell_of_i64(x as i64).is_some_and(|c| m >> c & 1 == 1)
                    })
                    .unwrap(),
                )
            }
        }
    }

    /// Mask of a set that is a union of cells; `None` otherwise.
    pub fn set_to_mask(&self, x: &RecSet) -> Result<Option<u128>> {
        if x.carrier() != self.base.carrier() {
            return Err(Error::Domain("set and family live on different carriers".into()));
        }
        if self.domain == Domain::Nx && x.member(&BigInt::from(0))? {
            return Ok(None);
        }
        let mut m = 0u128;
        for (i, &r) in self.reps.iter().enumerate() {
            if x.member(&BigInt::from(r))? {
                m |= bit(i);
            }
        }
        Ok(if self.mask_to_set(m).equals(x)? { Some(m) } else { None })
    }

    /// `c ≤_L d`: every generator containing `d` contains `c`.
    fn below(&self, c: usize, d: usize) -> bool {
        self.sig[d].iter().zip(&self.sig[c]).all(|(&sd, &sc)| !sd || sc)
    }

    fn union_seeds(&self) -> u128 {
        self.seeds.iter().fold(0, |m, s| m | s.mask)
    }

    fn inter_seeds(&self) -> u128 {
        self.seeds.iter().fold(self.full_mask(), |m, s| m & s.mask)
    }

    /// First reason `m` is not in the family of the given kind.
    fn obstruction(&self, m: u128, kind: ClosureKind) -> Option<Obstruction> {
        let n = self.reps.len();
        for c in 0..n {
            for d in 0..n {
                if self.class[c] == self.class[d] && (m >> c & 1) != (m >> d & 1) {
                    return Some(Obstruction::Split { inside: if m >> c & 1 == 1 { c } else { d }, outside: if m >> c & 1 == 1 { d } else { c } });
                }
            }
        }
        if kind == ClosureKind::Boolean {
            return None;
        }
        for d in mask_iter(m) {
            for c in 0..n {
                if m >> c & 1 == 0 && self.below(c, d) {
                    return Some(Obstruction::NotInitial { below: c, above: d });
                }
            }
        }
        if m == 0 {
            if self.inter_seeds() != 0 {
                return Some(Obstruction::EmptyUnreachable);
            }
        } else if let Some(c) = mask_iter(m & !self.union_seeds()).next() {
            return Some(Obstruction::Uncovered { cell: c });
        }
        None
    }

    pub fn contains_mask(&self, m: u128, kind: ClosureKind) -> bool {
        self.obstruction(m, kind).is_none()
    }

    /// A union-of-intersections expression for a member.
    pub fn dnf(&self, m: u128, kind: ClosureKind) -> Option<Dnf> {
        if !self.contains_mask(m, kind) {
            return None;
        }
        if let Some(s) = self.seeds.iter().find(|s| s.mask == m) {
            return Some(Dnf { terms: vec![vec![Literal { gen: s.gen, positive: true }]] });
        }
        let n = self.reps.len();
        let mut terms: Vec<(u128, Vec<Literal>)> = Vec::new();
        let mut classes_done = BTreeSet::new();
        let targets: Vec<usize> = if m == 0 { vec![usize::MAX] } else { mask_iter(m).collect() };
        for c in targets {
            if c != usize::MAX && !classes_done.insert(self.class[c]) {
                continue;
            }
            let (set, lits) = match kind {
                ClosureKind::Lattice => {
                    // seeds containing c (all seeds for the empty set), minus supersets of others
                    let chosen: Vec<&Seed> = self
                        .seeds
                        .iter()
                        .filter(|s| c == usize::MAX || s.mask >> c & 1 == 1)
                        .collect();
                    let set = chosen.iter().fold(self.full_mask(), |acc, s| acc & s.mask);
                    let mut kept: Vec<&Seed> = Vec::new();
                    for s in &chosen {
                        let redundant = chosen.iter().any(|t| t.mask != s.mask && t.mask & !s.mask == 0);
                        if !redundant && !kept.iter().any(|k| k.mask == s.mask) {
                            kept.push(s);
                        }
                    }
                    let lits = kept.iter().map(|s| Literal { gen: s.gen, positive: true }).collect();
                    (set, lits)
                }
                ClosureKind::Boolean => {
                    if c == usize::MAX {
                        let s = &self.seeds[0];
                        let lits = vec![
                            Literal { gen: s.gen, positive: true },
                            Literal { gen: s.gen, positive: false },
                        ];
                        (0, lits)
                    } else {
                        let set = (0..n).filter(|&d| self.class[d] == self.class[c]).fold(0, |acc, d| acc | bit(d));
                        let lits = self
                            .seeds
                            .iter()
                            .map(|s| Literal { gen: s.gen, positive: s.mask >> c & 1 == 1 })
                            .collect();
                        (set, lits)
                    }
                }
            };
            terms.push((set, lits));
        }
        // drop terms covered by another term
        let mut out: Vec<(u128, Vec<Literal>)> = Vec::new();
        for (i, (s, l)) in terms.iter().enumerate() {
            let dominated = terms
                .iter()
                .enumerate()
                .any(|(j, (t, _))| j != i && s & !t == 0 && (s != t || j < i));
            if !dominated {
                out.push((*s, l.clone()));
            }
        }
        debug_assert_eq!(out.iter().fold(0, |acc, (s, _)| acc | s), m);
        Some(Dnf { terms: out.into_iter().map(|(_, l)| l).collect() })
    }

    /// Membership of `x` in the family, with a witness expression.
    pub fn member_of(&self, x: &RecSet, kind: ClosureKind) -> Result<Option<Dnf>> {
        Ok(match self.set_to_mask(x)? {
            Some(m) => self.dnf(m, kind),
            None => None,
        })
    }

    /// Worklist closure of the generators. Fails with a bound error past `cap`.
    pub fn generate(&self, kind: ClosureKind, cap: usize) -> Result<GeneratedFamily> {
        let full = self.full_mask();
        let mut found: BTreeSet<u128> = BTreeSet::new();
        let mut queue: VecDeque<u128> = self.seeds.iter().map(|s| s.mask).collect();
        while let Some(s) = queue.pop_front() {
            if found.contains(&s) {
                continue;
            }
            if found.len() >= cap {
                return Err(Error::Bound(format!("family has more than {cap} members")));
            }
            found.insert(s);
            let mut new = Vec::new();
            if kind == ClosureKind::Boolean {
                new.push(!s & full);
            }
            for &t in &found {
                new.push(s | t);
                new.push(s & t);
            }
            for t in new {
                if !found.contains(&t) {
                    queue.push_back(t);
                }
            }
        }
        Ok(GeneratedFamily { space: self.clone(), kind, members: found.into_iter().collect() })
    }

    fn window_point_of_class(&self, f: &FnTable) -> Vec<Option<i64>> {
        let mut pts = vec![None; self.num_classes()];
        for (x, _) in f.iter() {
            if let Some(c) = self.cell_of_i64(x) {
                let cl = self.class[c];
                if pts[cl].is_none() {
                    pts[cl] = Some(x);
                }
            }
        }
        pts
    }

    /// Window needed so every cell has a point.
    pub fn required_window(&self) -> u64 {
        match self.domain {
            Domain::Z => self.k as u64,
            _ => (self.a + self.k) as u64,
        }
    }

    /// Does the sampled preimage `{x in window : f(x) ∈ L}` agree with a
    /// family member?
    pub fn check_finv_in(&self, f: &FnTable, kind: ClosureKind) -> Result<FinvVerdict> {
        match (self.domain, f.domain()) {
            (Domain::Z, Domain::Z) | (Domain::N, Domain::N) | (Domain::Nx, Domain::Nx) | (Domain::Nx, Domain::N) => {}
            _ => return Err(Error::Domain("table domain does not match the carrier".into())),
        }
        let pts = self.window_point_of_class(f);
        if pts.iter().any(Option::is_none) {
            return Err(Error::Window {
                reason: format!(
                    "window {}..={} misses a syntactic class of {}",
                    f.lo(),
                    f.hi(),
                    self.base
                ),
                required: self.required_window(),
            });
        }
        let mut value: Vec<Option<(bool, i64)>> = vec![None; self.num_classes()];
        for (x, fx) in f.iter() {
            let Some(c) = self.cell_of_i64(x) else {
                if self.domain == Domain::Nx && x == 0 {
                    continue;
                }
                return Err(Error::Domain(format!("{x} is outside the carrier")));
            };
            if self.cell_of(fx).is_none() {
                return Err(Error::Domain(format!("f({x}) = {fx} is outside the carrier")));
            }
            let inside = self.base.member(fx)?;
            let cl = self.class[c];
            match value[cl] {
                None => value[cl] = Some((inside, x)),
                Some((v, y)) if v != inside => {
                    let (inside_pt, outside_pt) = if inside { (x, y) } else { (y, x) };
                    return Ok(FinvVerdict::Refuted {
                        reason: Refutation::SplitClass { inside: inside_pt, outside: outside_pt },
                    });
                }
                _ => {}
            }
        }
        let m = (0..self.num_cells())
            .filter(|&c| value[self.class[c]].unwrap().0)
            .fold(0u128, |acc, c| acc | bit(c));
        let point = |c: usize| pts[self.class[c]].unwrap();
        Ok(match self.obstruction(m, kind) {
            None => FinvVerdict::Matched { member: self.mask_to_set(m), dnf: self.dnf(m, kind).unwrap() },
            Some(Obstruction::Split { .. }) => unreachable!("classes are constant by construction"),
            Some(Obstruction::NotInitial { below, above }) => FinvVerdict::Refuted {
                reason: Refutation::NotInitial { below: point(below), above: point(above) },
            },
            Some(Obstruction::Uncovered { cell }) => {
                FinvVerdict::Refuted { reason: Refutation::Uncovered { x: point(cell) } }
            }
            Some(Obstruction::EmptyUnreachable) => FinvVerdict::Refuted { reason: Refutation::EmptyUnreachable },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Obstruction {
    Split { inside: usize, outside: usize },
    NotInitial { below: usize, above: usize },
    Uncovered { cell: usize },
    EmptyUnreachable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// Two window points in one syntactic class, one in the preimage.
    SplitClass { inside: i64, outside: i64 },
    /// `below ≤_L above`, `above` in the preimage, `below` not.
    NotInitial { below: i64, above: i64 },
    /// In the preimage but in no generator.
    Uncovered { x: i64 },
    /// Preimage empty while every generator meets a common point.
    EmptyUnreachable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FinvVerdict {
    Matched {
        member: RecSet,
        #[serde(serialize_with = "dnf_string")]
        dnf: Dnf,
    },
    Refuted {
        reason: Refutation,
    },
}

fn dnf_string<S: serde::Serializer>(d: &Dnf, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&d.to_string())
}

impl FinvVerdict {
    pub fn is_matched(&self) -> bool {
        matches!(self, FinvVerdict::Matched { .. })
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedFamily {
    space: DuoSpace,
    kind: ClosureKind,
    members: Vec<u128>,
}

/// Generate with the default member cap.
pub fn generate(base: &RecSet, domain: Domain, signature: Signature, kind: ClosureKind) -> Result<GeneratedFamily> {
    DuoSpace::new(base, domain, signature)?.generate(kind, MEMBER_CAP)
}

impl GeneratedFamily {
    pub fn space(&self) -> &DuoSpace {
        &self.space
    }

    pub fn kind(&self) -> ClosureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u128] {
        &self.members
    }

    pub fn members(&self) -> Vec<RecSet> {
        self.members.iter().map(|&m| self.space.mask_to_set(m)).collect()
    }

    pub fn contains(&self, x: &RecSet) -> Result<bool> {
        Ok(match self.space.set_to_mask(x)? {
            Some(m) => self.members.binary_search(&m).is_ok(),
            None => false,
        })
    }

    /// Membership with a witness expression.
    pub fn member_of(&self, x: &RecSet) -> Result<Option<Dnf>> {
        let Some(m) = self.space.set_to_mask(x)? else {
            return Ok(None);
        };
        if self.members.binary_search(&m).is_err() {
            return Ok(None);
        }
        Ok(Some(self.space.dnf(m, self.kind).ok_or_else(|| {
            Error::Invariant("enumerated member fails the characterization".into())
        })?))
    }

    pub fn check_finv_in(&self, f: &FnTable) -> Result<FinvVerdict> {
        self.space.check_finv_in(f, self.kind)
    }

    /// Pairwise unions, intersections (and complements) stay inside.
    pub fn is_closed(&self) -> bool {
        let set: BTreeSet<u128> = self.members.iter().copied().collect();
        let full = self.space.full_mask();
        self.members.iter().all(|&x| {
            (self.kind == ClosureKind::Lattice || set.contains(&(!x & full)))
                && self.members.iter().all(|&y| set.contains(&(x | y)) && set.contains(&(x & y)))
        })
    }

    pub fn to_json(&self) -> Value {
        let members: Vec<Value> = self
            .members
            .iter()
            .map(|&m| {
                let set = self.space.mask_to_set(m);
                json!({
                    "set": set.to_json(),
                    "display": set.to_string(),
                    "dnf": self.space.dnf(m, self.kind).map(|d| d.to_string()),
                })
            })
            .collect();
        json!({
            "base": self.space.base.to_json(),
            "carrier": self.space.domain,
            "signature": self.space.signature,
            "kind": self.kind,
            "cells": self.space.num_cells(),
            "classes": self.space.num_classes(),
            "generators": self.space.seeds.iter().map(|s| s.gen.to_string()).collect::<Vec<_>>(),
            "size": self.members.len(),
            "members": members,
        })
    }

    /// Hasse diagram of inclusion.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph family {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, &m) in self.members.iter().enumerate() {
            let label = self.space.mask_to_set(m).to_string().replace('"', "\\\"");
            out.push_str(&format!("  m{i} [label=\"{label}\"];\n"));
        }
        let ms = &self.members;
        for (i, &x) in ms.iter().enumerate() {
            for (j, &y) in ms.iter().enumerate() {
                if x == y || x & !y != 0 {
                    continue;
                }
                let covered = ms.iter().any(|&z| z != x && z != y && x & !z == 0 && z & !y == 0);
                if !covered {
                    out.push_str(&format!("  m{i} -> m{j};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Outcome of testing a sampled preimage of a regular subset of ℤ against
/// the lattice generated by its translates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularReport {
    pub window: i64,
    pub translation_bound: i64,
    /// negative members of the sampled preimage
    pub preimage_negatives: usize,
    /// most negative members any single translate has in the window
    pub max_translate_negatives: usize,
    pub matched: bool,
    pub reason: Option<Refutation>,
}

/// Window test of `f⁻¹(L)` against the lattice generated by `L - t`,
/// `|t| <= t_bound`, all sampled on `-window..=window`.
pub fn regular_check(l: &RegSetZ, f: impl Fn(i64) -> BigInt, window: i64, t_bound: i64) -> RegularReport {
    let pts: Vec<i64> = (-window..=window).collect();
    let sample = |p: &dyn Fn(i64) -> bool| -> Vec<bool> { pts.iter().map(|&x| p(x)).collect() };
    let target = sample(&|x| l.member(&f(x)));
    let translates: Vec<Vec<bool>> =
        (-t_bound..=t_bound).map(|t| sample(&|x| l.member(&BigInt::from(x + t)))).collect();
    let negatives = |s: &[bool]| pts.iter().zip(s).filter(|(&x, &b)| x < 0 && b).count();
    let mut reason = None;
    for (i, &x) in pts.iter().enumerate() {
        if !target[i] {
            continue;
        }
        let containing: Vec<&Vec<bool>> = translates.iter().filter(|s| s[i]).collect();
        if containing.is_empty() {
            reason = Some(Refutation::Uncovered { x });
            break;
        }
        let bad = (0..pts.len()).find(|&j| !target[j] && containing.iter().all(|s| s[j]));
        if let Some(j) = bad {
            reason = Some(Refutation::NotInitial { below: pts[j], above: x });
            break;
        }
    }
    if reason.is_none() && target.iter().all(|&b| !b) {
        let all = (0..pts.len()).any(|j| translates.iter().all(|s| s[j]));
        if all {
            reason = Some(Refutation::EmptyUnreachable);
        }
    }
    RegularReport {
        window,
        translation_bound: t_bound,
        preimage_negatives: negatives(&target),
        max_translate_negatives: translates.iter().map(|s| negatives(s)).max().unwrap_or(0),
        matched: reason.is_none(),
        reason,
    }
}

/// `L = 6 + 10ℕ` inside ℤ, `f(x) = x²`, window ±200, translations up to 100.
pub fn regular_counterexample_check() -> RegularReport {
    let l = RegSetZ::new(UPSetN::progression(6, 10).unwrap(), UPSetN::empty());
    regular_check(&l, |x| BigInt::from(x) * x, 200, 100)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn zset(k: usize, g: &[i64]) -> RecSet {
        RecSet::Z(UPSetZ::residues(k, g).unwrap())
    }

    fn nset(elems: &[u64]) -> RecSet {
        RecSet::N(UPSetN::finite(elems).unwrap())
    }

    #[test]
    fn z_translations_give_all_residue_sets() {
        let fam = generate(&zset(10, &[6]), Domain::Z, Signature::Add, ClosureKind::Lattice).unwrap();
        assert_eq!(fam.len(), 1024);
        assert!(fam.is_closed());
        let whole = RecSet::Z(UPSetZ::full());
        assert!(fam.member_of(&whole).unwrap().is_some());
    }

    #[test]
    fn divisor_lattice_example() {
        let l = nset(&[1, 2, 4, 5, 10, 20]);
        let fam = generate(&l, Domain::Nx, Signature::Mul, ClosureKind::Lattice).unwrap();
        let expect: Vec<RecSet> = [
            &[][..],
            &[1],
            &[1, 2],
            &[1, 5],
            &[1, 2, 4],
            &[1, 2, 5],
            &[1, 2, 4, 5],
            &[1, 2, 5, 10],
            &[1, 2, 4, 5, 10],
            &[1, 2, 4, 5, 10, 20],
        ]
        .iter()
        .map(|s| nset(s))
        .collect();
        // L/5 ∪ L/2 = {1,2,4,5,10} is a union of members, so there are 10
        assert_eq!(fam.len(), 10);
        for e in &expect {
            assert!(fam.contains(e).unwrap(), "{e}");
        }
        let w = fam.member_of(&nset(&[1, 5])).unwrap().unwrap();
        assert_eq!(w.to_string(), "L/4");
        assert!(fam.member_of(&nset(&[1, 4])).unwrap().is_none());
    }

    #[test]
    fn empty_base() {
        for (l, d) in [(zset(1, &[]), Domain::Z), (RecSet::N(UPSetN::empty()), Domain::N)] {
            for sig in [Signature::Add, Signature::AddMul] {
                let fam = generate(&l, d, sig, ClosureKind::Lattice).unwrap();
                assert_eq!(fam.members(), vec![l.clone()]);
            }
        }
    }

    #[test]
    fn unsaturated_is_rejected() {
        let fam = generate(&zset(10, &[6]), Domain::Z, Signature::Add, ClosureKind::Lattice).unwrap();
        assert!(fam.member_of(&zset(20, &[6])).unwrap().is_none());
        assert!(!fam.contains(&zset(20, &[6])).unwrap());
    }

    #[test]
    fn square_over_z() {
        let space = DuoSpace::new(&zset(10, &[6]), Domain::Z, Signature::Add).unwrap();
        let f = FnTable::from_fn(Domain::Z, -20, 20, |x| BigInt::from(x * x)).unwrap();
        match space.check_finv_in(&f, ClosureKind::Lattice).unwrap() {
            FinvVerdict::Matched { member, .. } => assert_eq!(member, zset(10, &[4, 6])),
            other => panic!("{other:?}"),
        }
        let short = FnTable::from_fn(Domain::Z, 0, 5, |x| BigInt::from(x * x)).unwrap();
        match space.check_finv_in(&short, ClosureKind::Lattice) {
            Err(Error::Window { required, .. }) => assert_eq!(required, 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn translations_always_match() {
        let base = RecSet::N(UPSetN::from_lists(3, 4, &[0, 2], &[1]).unwrap());
        let space = DuoSpace::new(&base, Domain::N, Signature::Add).unwrap();
        for c in 0..9 {
            let f = FnTable::from_fn(Domain::N, 0, 30, |x| BigInt::from(x + c)).unwrap();
            assert!(space.check_finv_in(&f, ClosureKind::Lattice).unwrap().is_matched());
        }
    }

    #[test]
    fn power_of_two_refuted() {
        let space = DuoSpace::new(&zset(10, &[6]), Domain::Z, Signature::Add).unwrap();
        let f = FnTable::from_fn(Domain::Z, -30, 30, |x| if x >= 0 { BigInt::one() << x } else { BigInt::from(0) }).unwrap();
        assert!(matches!(
            space.check_finv_in(&f, ClosureKind::Lattice).unwrap(),
            FinvVerdict::Refuted { reason: Refutation::SplitClass { .. } }
        ));
    }

    #[test]
    fn regular_counterexample() {
        let r = regular_counterexample_check();
        assert!(!r.matched);
        assert!(r.preimage_negatives > r.max_translate_negatives);
        let l = RegSetZ::new(UPSetN::progression(6, 10).unwrap(), UPSetN::empty());
        assert!(regular_check(&l, BigInt::from, 200, 100).matched);
    }

    #[test]
    fn dot_and_json() {
        let fam = generate(&nset(&[1, 2, 4, 5, 10, 20]), Domain::Nx, Signature::Mul, ClosureKind::Lattice).unwrap();
        let dot = fam.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), 12);
        let j = fam.to_json();
        assert_eq!(j["size"], 10);
    }
}
