//! Frying-pan monoids and semirings M_{a,k}: the quotients of ℕ by
//! x ~ y iff x = y or (x, y >= a and x ≡ y mod k).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactint::euler_phi_u64;
use crate::finalg::FiniteAlgebra;

/// Tail length `a`, cycle length `k >= 1`; carrier `0..a+k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FryingPan {
    a: usize,
    k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Suc,
    Add,
    Mul,
}

impl FryingPan {
    pub fn new(a: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("cycle length k must be >= 1".into()));
        }
        Ok(FryingPan { a, k })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        self.a + self.k
    }

    /// Canonical representative of x.
    pub fn phi(&self, x: &BigInt) -> Result<usize> {
        if x.is_negative() {
            return Err(Error::Domain(format!("phi_ak needs x >= 0, got {x}")));
        }
        let a = BigInt::from(self.a);
        if x < &a {
            return Ok(x.to_usize().expect("below a"));
        }
        let r = (x - &a).mod_floor(&BigInt::from(self.k));
        Ok(self.a + r.to_usize().expect("below k"))
    }

    /// Word-size version of [`FryingPan::phi`].
    pub fn phi_u(&self, x: u64) -> usize {
        let a = self.a as u64;
        if x < a {
            x as usize
        } else {
            self.a + ((x - a) % self.k as u64) as usize
        }
    }

    fn check_arg(&self, x: usize) -> Result<()> {
        if x >= self.size() {
            return Err(Error::Domain(format!("{x} is outside the carrier 0..{}", self.size())));
        }
        Ok(())
    }

    pub fn suc(&self, x: usize) -> usize {
        self.phi_u(x as u64 + 1)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.phi_u((x + y) as u64)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.phi_u((x * y) as u64)
    }

    /// Apply `op` to carrier elements, checking arity and range.
    pub fn op(&self, op: Op, args: &[usize]) -> Result<usize> {
        for &x in args {
            self.check_arg(x)?;
        }
        match (op, args) {
            (Op::Suc, [x]) => Ok(self.suc(*x)),
            (Op::Add, [x, y]) => Ok(self.add(*x, *y)),
            (Op::Mul, [x, y]) => Ok(self.mul(*x, *y)),
            _ => Err(Error::Domain(format!("{op:?} applied to {} arguments", args.len()))),
        }
    }

    /// Generators of the additive monoid, by the closed formula.
    pub fn generators(&self) -> BTreeSet<usize> {
        if self.a == 0 && self.k == 1 {
            // the trivial monoid is generated by its only element
            return BTreeSet::from([0]);
        }
        if self.a >= 2 {
            return BTreeSet::from([1]);
        }
        (1..self.size()).filter(|&g| g.gcd(&self.k) == 1).collect()
    }

    /// Generators found by closing each element's orbit under addition.
    pub fn generators_brute_force(&self) -> BTreeSet<usize> {
        (0..self.size())
            .filter(|&g| {
                let mut seen = vec![false; self.size()];
                let mut x = 0;
                while !seen[x] {
                    seen[x] = true;
                    x = self.add(x, g);
                }
                seen.iter().all(|&b| b)
            })
            .collect()
    }

    /// Number of surjective monoid morphisms ⟨ℕ;+⟩ → ⟨M_{a,k};+⟩.
    pub fn surjective_morphism_count(&self) -> BigInt {
        let small = matches!((self.a, self.k), (0, 1) | (0, 2) | (1, 1) | (1, 2));
        if self.a >= 2 || small {
            BigInt::from(1)
        } else {
            BigInt::from(euler_phi_u64(self.k as u64))
        }
    }

    /// Count morphisms directly: a morphism is fixed by the image g of 1,
    /// and is onto iff g generates.
    pub fn surjective_morphism_count_brute_force(&self) -> usize {
        self.generators_brute_force().len()
    }

    /// Exhaustive check of the commutative semiring axioms; `None` if all hold.
    pub fn semiring_check(&self) -> Option<AxiomFailure> {
        let n = self.size();
        for x in 0..n {
            if self.add(x, 0) != x {
                return Some(AxiomFailure::new("additive identity", &[x]));
            }
            if self.mul(x, 1 % n) != x && n > 1 {
                return Some(AxiomFailure::new("multiplicative identity", &[x]));
            }
            if self.mul(x, 0) != 0 || self.mul(0, x) != 0 {
                return Some(AxiomFailure::new("zero annihilates", &[x]));
            }
            for y in 0..n {
                if self.add(x, y) != self.add(y, x) {
                    return Some(AxiomFailure::new("additive commutativity", &[x, y]));
                }
                if self.mul(x, y) != self.mul(y, x) {
                    return Some(AxiomFailure::new("multiplicative commutativity", &[x, y]));
                }
                for z in 0..n {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        return Some(AxiomFailure::new("additive associativity", &[x, y, z]));
                    }
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Some(AxiomFailure::new("multiplicative associativity", &[x, y, z]));
                    }
                    if self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z)) {
                        return Some(AxiomFailure::new("left distributivity", &[x, y, z]));
                    }
                    if self.mul(self.add(y, z), x) != self.add(self.mul(y, x), self.mul(z, x)) {
                        return Some(AxiomFailure::new("right distributivity", &[x, y, z]));
                    }
                }
            }
        }
        None
    }

    /// Finite algebra with the requested operations, in the given order.
    pub fn algebra(&self, ops: &[Op]) -> FiniteAlgebra {
        let n = self.size();
        let mut alg = FiniteAlgebra::new(n);
        for op in ops {
            match op {
                Op::Suc => alg.push_op(1, (0..n).map(|x| self.suc(x)).collect()),
                Op::Add => alg.push_op(2, (0..n * n).map(|i| self.add(i / n, i % n)).collect()),
                Op::Mul => alg.push_op(2, (0..n * n).map(|i| self.mul(i / n, i % n)).collect()),
            }
            .expect("tables are well formed");
        }
        alg
    }

    /// Graphviz rendering of the successor digraph: a tail path into a cycle.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph M_{}_{} {{", self.a, self.k);
        let _ = writeln!(s, "  rankdir=LR;");
        for x in 0..self.size() {
            let shape = if x < self.a { "circle" } else { "doublecircle" };
            let _ = writeln!(s, "  n{x} [label=\"{x}\", shape={shape}];");
        }
        for x in 0..self.size() {
            let _ = writeln!(s, "  n{x} -> n{};", self.suc(x));
        }
        s.push_str("}\n");
        s
    }
}

/// First axiom instance that fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: String,
    pub elements: Vec<usize>,
}

impl AxiomFailure {
    fn new(axiom: &str, elements: &[usize]) -> Self {
        AxiomFailure { axiom: axiom.to_string(), elements: elements.to_vec() }
    }
}

/// Result of recognising a monogenic monoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Monogenic {
    /// `iso[x]` is the element reached by adding x copies of the generator.
    Iso { a: usize, k: usize, iso: Vec<usize> },
    NotMonogenic,
}

/// Identify `table`'s first binary operation as some M_{a,k} generated by `g`.
pub fn classify_monogenic(table: &FiniteAlgebra, g: usize) -> Result<Monogenic> {
    let n = table.size();
    let op = table
        .ops()
        .iter()
        .position(|o| o.arity == 2)
        .ok_or_else(|| Error::Precondition("no binary operation".into()))?;
    if g >= n {
        return Err(Error::Domain(format!("generator {g} outside carrier")));
    }
    let f = |x: usize, y: usize| table.apply(op, &[x, y]);
    let unit = (0..n)
        .find(|&e| (0..n).all(|x| f(e, x) == x && f(x, e) == x))
        .ok_or_else(|| Error::Precondition("no two-sided unit".into()))?;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if f(f(x, y), z) != f(x, f(y, z)) {
                    return Err(Error::Precondition(format!(
                        "not associative at ({x}, {y}, {z})"
                    )));
                }
            }
        }
    }
    // orbit s_0 = unit, s_{i+1} = s_i + g
    let mut first_seen = vec![usize::MAX; n];
    let mut orbit = Vec::new();
    let mut s = unit;
    while first_seen[s] == usize::MAX {
        first_seen[s] = orbit.len();
        orbit.push(s);
        s = f(s, g);
    }
    if orbit.len() < n {
        return Ok(Monogenic::NotMonogenic);
    }
    let a = first_seen[s];
    let k = orbit.len() - a;
    Ok(Monogenic::Iso { a, k, iso: orbit })
}
