//! Finite algebras given by operation tables, and the relational
//! machinery on top of them: frozen functions, derived unary operations
//! (DUOs), congruences, stable preorders, syntactic relations, quotients
//! and the preimage decompositions.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default carrier bound for brute-force stable-preorder enumeration.
pub const PREORDER_BOUND: usize = 5;

/// A unary function on `0..n` as a table.
pub type Unary = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub arity: usize,
    /// Row-major: argument tuple `(x1, ..., xk)` sits at `x1*n^(k-1) + ... + xk`.
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra", into = "RawAlgebra")]
pub struct FiniteAlgebra {
    n: usize,
    ops: Vec<Operation>,
}

#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    n: usize,
    ops: Vec<Operation>,
}

impl TryFrom<RawAlgebra> for FiniteAlgebra {
    type Error = Error;

    fn try_from(raw: RawAlgebra) -> Result<Self> {
        if raw.n == 0 {
            return Err(Error::Input("carrier must be nonempty".into()));
        }
        let mut alg = FiniteAlgebra::new(raw.n);
        for op in raw.ops {
            alg.push_op(op.arity, op.table)?;
        }
        Ok(alg)
    }
}

impl From<FiniteAlgebra> for RawAlgebra {
    fn from(a: FiniteAlgebra) -> Self {
        RawAlgebra { n: a.n, ops: a.ops }
    }
}

/// A partition in canonical restricted-growth form: the first element of
/// each class is smaller than the first element of every later class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    class: Vec<usize>,
}

impl Partition {
    /// Canonicalize arbitrary labels.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut seen: std::collections::HashMap<T, usize> = Default::default();
        let class = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition { class }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { class: (0..n).collect() }
    }

    pub fn full(n: usize) -> Self {
        Partition { class: vec![0; n] }
    }

    pub fn from_blocks(n: usize, blocks: &[&[usize]]) -> Result<Self> {
        let mut lab = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b.iter() {
                if x >= n || lab[x] != usize::MAX {
                    return Err(Error::Input(format!("bad block element {x}")));
                }
                lab[x] = i;
            }
        }
        if lab.contains(&usize::MAX) {
            return Err(Error::Input("blocks do not cover the carrier".into()));
        }
        Ok(Self::from_labels(&lab))
    }

    pub fn size(&self) -> usize {
        self.class.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    pub fn num_classes(&self) -> usize {
        self.class.iter().max().map_or(0, |m| m + 1)
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (x, &c) in self.class.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut img = vec![usize::MAX; self.num_classes()];
        for (x, &c) in self.class.iter().enumerate() {
            if img[c] == usize::MAX {
                img[c] = other.class[x];
            } else if img[c] != other.class[x] {
                return false;
            }
        }
        true
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.size());
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_classes()];
            for (x, &c) in p.class.iter().enumerate() {
                if first[c] == usize::MAX {
                    first[c] = x;
                } else {
                    uf.union(first[c], x);
                }
            }
        }
        uf.partition()
    }

    /// `set` is a union of classes.
    pub fn saturates(&self, set: &[bool]) -> bool {
        let mut val: Vec<Option<bool>> = vec![None; self.num_classes()];
        for (x, &c) in self.class.iter().enumerate() {
            match val[c] {
                None => val[c] = Some(set[x]),
                Some(v) if v != set[x] => return false,
                _ => {}
            }
        }
        true
    }

    pub fn to_rel(&self) -> BinRel {
        let n = self.size();
        let mut r = BinRel::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.same(x, y) {
                    r.set(x, y, true);
                }
            }
        }
        r
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", blocks.join(" "))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }

    fn partition(&mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&labels)
    }
}

/// A binary relation on `0..n`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BinRel {
    n: usize,
    m: Vec<bool>,
}

impl BinRel {
    pub fn empty(n: usize) -> Self {
        BinRel { n, m: vec![false; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.set(x, x, true);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        BinRel { n, m: vec![true; n * n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut r = Self::empty(n);
        for &(x, y) in pairs {
            r.set(x, y, true);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.m[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.m[x * self.n + y] = v;
    }

    pub fn matrix(&self) -> &[bool] {
        &self.m
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| (0..self.n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.get(x, y))
            .collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.get(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| self.get(x, y) == self.get(y, x)))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| !(self.get(x, y) && self.get(y, x))))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                if self.get(x, y) {
                    for z in 0..n {
                        if self.get(y, z) && !self.get(x, z) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    /// `x ~ y` iff `x ≤ y` and `y ≤ x`.
    pub fn symmetric_part(&self) -> BinRel {
        let mut r = self.clone();
        for x in 0..self.n {
            for y in 0..self.n {
                r.set(x, y, self.get(x, y) && self.get(y, x));
            }
        }
        r
    }

    /// The partition of an equivalence relation.
    pub fn to_partition(&self) -> Result<Partition> {
        if !(self.is_reflexive() && self.is_symmetric() && self.is_transitive()) {
            return Err(Error::Precondition("relation is not an equivalence".into()));
        }
        let labels: Vec<usize> = (0..self.n).map(|x| (0..self.n).find(|&y| self.get(x, y)).unwrap()).collect();
        Ok(Partition::from_labels(&labels))
    }
}

/// Result of pushing a function through a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Induced {
    Defined(Unary),
    /// `x` and `y` share a class but `f(x)` and `f(y)` do not.
    IllDefined { x: usize, y: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cancellation {
    Group { unit: usize, inverse: Unary },
    /// `x * z == y * z` (`right == true`) or `z * x == z * y` with `x != y`.
    NotCancellable { x: usize, y: usize, z: usize, right: bool },
    NotAssociative { x: usize, y: usize, z: usize },
}

/// Kind of closure for families of subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureKind {
    /// binary unions and intersections
    Lattice,
    /// plus complement
    Boolean,
}

impl FiniteAlgebra {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "carrier must be nonempty");
        FiniteAlgebra { n, ops: Vec::new() }
    }

    pub fn push_op(&mut self, arity: usize, table: Vec<usize>) -> Result<()> {
        let len = u32::try_from(arity)
            .ok()
            .and_then(|a| self.n.checked_pow(a))
            .ok_or_else(|| Error::Bound(format!("table of arity {arity} is too large")))?;
        if table.len() != len {
            return Err(Error::Input(format!(
                "arity {arity} on {} elements needs {len} entries, got {}",
                self.n,
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| v >= self.n) {
            return Err(Error::Input(format!("table value {v} outside the carrier")));
        }
        self.ops.push(Operation { arity, table });
        Ok(())
    }

    /// Same algebra with one more operation.
    pub fn with_op(mut self, arity: usize, table: Vec<usize>) -> Result<Self> {
        self.push_op(arity, table)?;
        Ok(self)
    }

    /// ℤ/nℤ with addition.
    pub fn cyclic_add(n: usize) -> Self {
        FiniteAlgebra::new(n).with_op(2, (0..n * n).map(|i| (i / n + i % n) % n).collect()).unwrap()
    }

    /// ℤ/nℤ with multiplication.
    pub fn cyclic_mul(n: usize) -> Self {
        FiniteAlgebra::new(n).with_op(2, (0..n * n).map(|i| (i / n) * (i % n) % n).collect()).unwrap()
    }

    /// A carrier with only the identity operation.
    pub fn identity_only(n: usize) -> Self {
        FiniteAlgebra::new(n).with_op(1, (0..n).collect()).unwrap()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.n + a)
    }

    /// Evaluate an operation. Panics on bad indices.
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let o = &self.ops[op];
        assert_eq!(args.len(), o.arity, "arity mismatch");
        o.table[self.index(args)]
    }

    /// `x ↦ op(c1, .., x, .., ck)` with `x` in position `i`.
    pub fn freeze(&self, op: usize, i: usize, frozen: &[usize]) -> Result<Unary> {
        let o = self
            .ops
            .get(op)
            .ok_or_else(|| Error::Input(format!("no operation {op}")))?;
        if o.arity == 0 || i >= o.arity || frozen.len() + 1 != o.arity {
            return Err(Error::Input(format!(
                "cannot freeze position {i} of an arity-{} operation with {} constants",
                o.arity,
                frozen.len()
            )));
        }
        if frozen.iter().any(|&c| c >= self.n) {
            return Err(Error::Input("frozen argument outside the carrier".into()));
        }
        let mut args: Vec<usize> = Vec::with_capacity(o.arity);
        args.extend_from_slice(&frozen[..i]);
        args.push(0);
        args.extend_from_slice(&frozen[i..]);
        Ok((0..self.n)
            .map(|x| {
                args[i] = x;
                o.table[self.index(&args)]
            })
            .collect())
    }

    /// All frozen unary functions, deduplicated and sorted.
    pub fn frozen_functions(&self) -> Vec<Unary> {
        let mut out = BTreeSet::new();
        for (k, o) in self.ops.iter().enumerate() {
            if o.arity == 0 {
                continue;
            }
            let m = o.arity - 1;
            let count = self.n.pow(m as u32);
            for i in 0..o.arity {
                for code in 0..count {
                    let mut c = vec![0; m];
                    let mut r = code;
                    for j in (0..m).rev() {
                        c[j] = r % self.n;
                        r /= self.n;
                    }
                    out.insert(self.freeze(k, i, &c).expect("valid freeze"));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Least set of unary functions containing the identity and the frozen
    /// functions, closed under composition. Sorted.
    pub fn duo_closure(&self) -> Vec<Unary> {
        self.duo_closure_capped(usize::MAX).expect("uncapped")
    }

    pub fn duo_closure_capped(&self, cap: usize) -> Result<Vec<Unary>> {
        let frozen = self.frozen_functions();
        let id: Unary = (0..self.n).collect();
        let mut seen: HashSet<Unary> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for f in &frozen {
                let h: Unary = g.iter().map(|&x| f[x]).collect();
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        return Err(Error::Bound(format!("more than {cap} derived unary operations")));
                    }
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        let mut out: Vec<Unary> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Orbit of `a` under the derived unary operations.
    pub fn gen_set(&self, a: usize) -> Vec<usize> {
        let frozen = self.frozen_functions();
        let mut seen = vec![false; self.n];
        seen[a] = true;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for f in &frozen {
                if !seen[f[x]] {
                    seen[f[x]] = true;
                    stack.push(f[x]);
                }
            }
        }
        (0..self.n).filter(|&x| seen[x]).collect()
    }

    fn stable_under(frozen: &[Unary], r: &BinRel) -> bool {
        let pairs = r.pairs();
        frozen.iter().all(|f| pairs.iter().all(|&(x, y)| r.get(f[x], f[y])))
    }

    /// Compatibility of `r` with every operation, checked on all tuples.
    pub fn is_stable_direct(&self, r: &BinRel) -> bool {
        let pairs = r.pairs();
        for o in &self.ops {
            if o.arity == 0 {
                let c = o.table[0];
                if !r.get(c, c) {
                    return false;
                }
                continue;
            }
            if pairs.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; o.arity];
            let mut xs = vec![0usize; o.arity];
            let mut ys = vec![0usize; o.arity];
            'tuples: loop {
                for (j, &i) in idx.iter().enumerate() {
                    xs[j] = pairs[i].0;
                    ys[j] = pairs[i].1;
                }
                if !r.get(o.table[self.index(&xs)], o.table[self.index(&ys)]) {
                    return false;
                }
                for j in (0..o.arity).rev() {
                    idx[j] += 1;
                    if idx[j] < pairs.len() {
                        continue 'tuples;
                    }
                    idx[j] = 0;
                }
                break;
            }
        }
        true
    }

    /// Stability of a relation. Reflexive relations are checked against the
    /// frozen functions only; others fall back to the direct tuple check.
    pub fn is_stable(&self, r: &BinRel) -> bool {
        if r.is_reflexive() {
            Self::stable_under(&self.frozen_functions(), r)
        } else {
            self.is_stable_direct(r)
        }
    }

    pub fn is_congruence(&self, p: &Partition) -> bool {
        let frozen = self.frozen_functions();
        Self::partition_stable(&frozen, p)
    }

    fn partition_stable(frozen: &[Unary], p: &Partition) -> bool {
        let blocks = p.blocks();
        frozen.iter().all(|f| {
            blocks
                .iter()
                .all(|b| b.iter().all(|&x| p.same(f[x], f[b[0]])))
        })
    }

    pub fn is_stable_preorder(&self, r: &BinRel) -> bool {
        r.is_preorder() && self.is_stable(r)
    }

    /// Least congruence relating `x` and `y`.
    pub fn principal_congruence(&self, x: usize, y: usize) -> Partition {
        self.congruence_closure(&self.frozen_functions(), &[(x, y)])
    }

    fn congruence_closure(&self, frozen: &[Unary], seeds: &[(usize, usize)]) -> Partition {
        let mut uf = UnionFind::new(self.n);
        for &(x, y) in seeds {
            uf.union(x, y);
        }
        loop {
            let mut changed = false;
            for f in frozen {
                for x in 0..self.n {
                    let r = uf.find(x);
                    if uf.union(f[x], f[r]) {
                        changed = true;
                    }
                }
            }
            if !changed {
                return uf.partition();
            }
        }
    }

    /// All congruences, sorted by their canonical class vectors.
    pub fn all_congruences(&self) -> Vec<Partition> {
        let frozen = self.frozen_functions();
        let mut found: BTreeSet<Partition> = BTreeSet::new();
        found.insert(Partition::discrete(self.n));
        let mut principals = BTreeSet::new();
        for x in 0..self.n {
            for y in 0..x {
                principals.insert(self.congruence_closure(&frozen, &[(x, y)]));
            }
        }
        let principals: Vec<Partition> = principals.into_iter().collect();
        let mut queue: VecDeque<Partition> = principals.iter().cloned().collect();
        while let Some(p) = queue.pop_front() {
            if !found.insert(p.clone()) {
                continue;
            }
            for q in &principals {
                let j = p.join(q);
                if !found.contains(&j) {
                    queue.push_back(j);
                }
            }
        }
        found.into_iter().collect()
    }

    /// Every partition, filtered by `is_congruence`. Small carriers only.
    pub fn all_congruences_brute_force(&self) -> Vec<Partition> {
        let frozen = self.frozen_functions();
        let mut out: Vec<Partition> = all_partitions(self.n)
            .into_iter()
            .filter(|p| Self::partition_stable(&frozen, p))
            .collect();
        out.sort();
        out
    }

    pub fn all_stable_preorders(&self) -> Result<Vec<BinRel>> {
        self.all_stable_preorders_bounded(PREORDER_BOUND)
    }

    /// Brute force over all reflexive relations, sorted lexicographically.
    pub fn all_stable_preorders_bounded(&self, bound: usize) -> Result<Vec<BinRel>> {
        let n = self.n;
        if n > bound {
            return Err(Error::Bound(format!(
                "stable preorder enumeration is limited to {bound} elements, carrier has {n}"
            )));
        }
        let off: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|(x, y)| x != y)
            .collect();
        let frozen = self.frozen_functions();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << off.len()) {
            let mut r = BinRel::identity(n);
            for (b, &(x, y)) in off.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    r.set(x, y, true);
                }
            }
            if r.is_transitive() && Self::stable_under(&frozen, &r) {
                out.push(r);
            }
        }
        out.sort();
        Ok(out)
    }

    fn check_subset(&self, l: &[bool]) -> Result<()> {
        if l.len() != self.n {
            return Err(Error::Input(format!("subset has {} flags, carrier has {}", l.len(), self.n)));
        }
        Ok(())
    }

    fn check_unary(&self, f: &[usize]) -> Result<()> {
        if f.len() != self.n || f.iter().any(|&v| v >= self.n) {
            return Err(Error::Input("unary table does not map the carrier to itself".into()));
        }
        Ok(())
    }

    /// `x ~_L y` iff every DUO sends both into `L` or both outside it.
    pub fn syntactic_congruence(&self, l: &[bool]) -> Result<Partition> {
        self.check_subset(l)?;
        let duos = self.duo_closure();
        let sigs: Vec<Vec<bool>> = (0..self.n).map(|x| duos.iter().map(|g| l[g[x]]).collect()).collect();
        Ok(Partition::from_labels(&sigs))
    }

    /// `x ≤_L y` iff `γ(y) ∈ L` implies `γ(x) ∈ L` for every DUO `γ`.
    pub fn syntactic_preorder(&self, l: &[bool]) -> Result<BinRel> {
        self.check_subset(l)?;
        let duos = self.duo_closure();
        let mut r = BinRel::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                r.set(x, y, duos.iter().all(|g| !l[g[y]] || l[g[x]]));
            }
        }
        Ok(r)
    }

    /// `x ρ y ⇒ f(x) ρ f(y)`.
    pub fn preserves(&self, f: &[usize], rel: &BinRel) -> Result<bool> {
        self.check_unary(f)?;
        Ok(rel.pairs().iter().all(|&(x, y)| rel.get(f[x], f[y])))
    }

    pub fn preserves_partition(&self, f: &[usize], p: &Partition) -> Result<bool> {
        self.check_unary(f)?;
        Ok((0..self.n).all(|x| (0..x).all(|y| !p.same(x, y) || p.same(f[x], f[y]))))
    }

    pub fn preserves_all_congruences(&self, f: &[usize]) -> Result<bool> {
        for p in self.all_congruences() {
            if !self.preserves_partition(f, &p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn preserves_all_stable_preorders(&self, f: &[usize]) -> Result<bool> {
        for r in self.all_stable_preorders()? {
            if !self.preserves(f, &r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Algebra on the classes of a congruence.
    pub fn quotient(&self, p: &Partition) -> Result<FiniteAlgebra> {
        if p.size() != self.n || !self.is_congruence(p) {
            return Err(Error::Precondition("partition is not a congruence".into()));
        }
        let blocks = p.blocks();
        let m = blocks.len();
        let mut q = FiniteAlgebra::new(m);
        for o in &self.ops {
            let len = m.pow(o.arity as u32);
            let table = (0..len)
                .map(|code| {
                    let mut args = vec![0; o.arity];
                    let mut r = code;
                    for j in (0..o.arity).rev() {
                        args[j] = blocks[r % m][0];
                        r /= m;
                    }
                    p.class_of(o.table[self.index(&args)])
                })
                .collect();
            q.push_op(o.arity, table)?;
        }
        Ok(q)
    }

    /// The map on classes induced by `f`, with the commuting square checked.
    pub fn induced_function(&self, f: &[usize], p: &Partition) -> Result<Induced> {
        self.check_unary(f)?;
        if p.size() != self.n || !self.is_congruence(p) {
            return Err(Error::Precondition("partition is not a congruence".into()));
        }
        let mut g = vec![usize::MAX; p.num_classes()];
        let mut rep = vec![usize::MAX; p.num_classes()];
        for x in 0..self.n {
            let c = p.class_of(x);
            let img = p.class_of(f[x]);
            if g[c] == usize::MAX {
                g[c] = img;
                rep[c] = x;
            } else if g[c] != img {
                return Ok(Induced::IllDefined { x: rep[c], y: x });
            }
        }
        if (0..self.n).any(|x| p.class_of(f[x]) != g[p.class_of(x)]) {
            return Err(Error::Invariant("induced square does not commute".into()));
        }
        Ok(Induced::Defined(g))
    }

    /// `⋃_{a ∈ f⁻¹(L)} ⋂_{γ : γ(a) ∈ L} γ⁻¹(L)`.
    pub fn decompose_preimage_lattice(&self, f: &[usize], l: &[bool]) -> Result<Vec<bool>> {
        self.check_unary(f)?;
        self.check_subset(l)?;
        let duos = self.duo_closure();
        let mut out = vec![false; self.n];
        for a in (0..self.n).filter(|&a| l[f[a]]) {
            for c in 0..self.n {
                if duos.iter().all(|g| !l[g[a]] || l[g[c]]) {
                    out[c] = true;
                }
            }
        }
        Ok(out)
    }

    /// Same shape with `A \ γ⁻¹(L)` for the DUOs sending `a` outside `L`.
    pub fn decompose_preimage_boolean(&self, f: &[usize], l: &[bool]) -> Result<Vec<bool>> {
        self.check_unary(f)?;
        self.check_subset(l)?;
        let duos = self.duo_closure();
        let mut out = vec![false; self.n];
        for a in (0..self.n).filter(|&a| l[f[a]]) {
            for c in 0..self.n {
                if duos.iter().all(|g| l[g[a]] == l[g[c]]) {
                    out[c] = true;
                }
            }
        }
        Ok(out)
    }

    /// Closure of `{γ⁻¹(L)}` under binary union and intersection, plus
    /// complement for the boolean kind. Sorted by bitmask (bit x = element x).
    pub fn lattice_closure(&self, l: &[bool], kind: ClosureKind) -> Result<Vec<Vec<bool>>> {
        self.check_subset(l)?;
        if self.n > 64 {
            return Err(Error::Bound("lattice closure is limited to 64 elements".into()));
        }
        let full: u64 = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let seeds: BTreeSet<u64> = self
            .duo_closure()
            .iter()
            .map(|g| (0..self.n).filter(|&x| l[g[x]]).fold(0u64, |m, x| m | 1 << x))
            .collect();
        let mut found: BTreeSet<u64> = BTreeSet::new();
        let mut queue: VecDeque<u64> = seeds.into_iter().collect();
        while let Some(s) = queue.pop_front() {
            if !found.insert(s) {
                continue;
            }
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
        Ok(found
            .into_iter()
            .map(|m| (0..self.n).map(|x| m >> x & 1 == 1).collect())
            .collect())
    }

    /// Certify that `op` is a group operation; the error names the failed axiom.
    pub fn check_group_op(&self, op: usize) -> Result<(usize, Unary)> {
        let o = self
            .ops
            .get(op)
            .ok_or_else(|| Error::Input(format!("no operation {op}")))?;
        if o.arity != 2 {
            return Err(Error::Precondition(format!("operation {op} is not binary")));
        }
        match self.cancellative_to_group(op)? {
            Cancellation::Group { unit, inverse } => Ok((unit, inverse)),
            Cancellation::NotAssociative { x, y, z } => Err(Error::Precondition(format!(
                "operation {op} is not associative at ({x},{y},{z})"
            ))),
            Cancellation::NotCancellable { x, y, z, right } => Err(Error::Precondition(if right {
                format!("operation {op} is not a group: {x}*{z} = {y}*{z}")
            } else {
                format!("operation {op} is not a group: {z}*{x} = {z}*{y}")
            })),
        }
    }

    /// Stable orders (antisymmetric stable preorders) of an algebra whose
    /// operation `op` is certified to be a group operation.
    pub fn stable_orders_of_group(&self, op: usize) -> Result<Vec<BinRel>> {
        self.check_group_op(op)?;
        Ok(self
            .all_stable_preorders()?
            .into_iter()
            .filter(|r| r.is_antisymmetric())
            .collect())
    }

    /// For a binary operation: associativity, then two-sided cancellation,
    /// then the unit and inverses.
    pub fn cancellative_to_group(&self, op: usize) -> Result<Cancellation> {
        let o = self
            .ops
            .get(op)
            .ok_or_else(|| Error::Input(format!("no operation {op}")))?;
        if o.arity != 2 {
            return Err(Error::Precondition(format!("operation {op} is not binary")));
        }
        let n = self.n;
        let m = |x: usize, y: usize| o.table[x * n + y];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if m(m(x, y), z) != m(x, m(y, z)) {
                        return Ok(Cancellation::NotAssociative { x, y, z });
                    }
                }
            }
        }
        for z in 0..n {
            for x in 0..n {
                for y in x + 1..n {
                    if m(x, z) == m(y, z) {
                        return Ok(Cancellation::NotCancellable { x, y, z, right: true });
                    }
                    if m(z, x) == m(z, y) {
                        return Ok(Cancellation::NotCancellable { x, y, z, right: false });
                    }
                }
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| Error::Invariant("cancellative semigroup without a unit".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| m(x, y) == unit && m(y, x) == unit)
                .ok_or_else(|| Error::Invariant(format!("{x} has no inverse")))?;
            inverse.push(y);
        }
        Ok(Cancellation::Group { unit, inverse })
    }
}

/// All partitions of `0..n` in canonical form (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == n {
            out.push(Partition { class: cur.clone() });
            return;
        }
        for c in 0..=max {
            cur.push(c);
            rec(i + 1, n, if c == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![Partition { class: vec![] }];
    }
    rec(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Subset flags from a list of elements.
pub fn subset(n: usize, elems: &[usize]) -> Vec<bool> {
    let mut s = vec![false; n];
    for &x in elems {
        s[x] = true;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn freeze_examples() {
        let z4 = FiniteAlgebra::cyclic_add(4);
        assert_eq!(z4.freeze(0, 0, &[1]).unwrap(), vec![1, 2, 3, 0]);
        assert_eq!(z4.freeze(0, 1, &[1]).unwrap(), vec![1, 2, 3, 0]);
        let u = FiniteAlgebra::new(3).with_op(1, vec![2, 0, 1]).unwrap();
        assert_eq!(u.freeze(0, 0, &[]).unwrap(), vec![2, 0, 1]);
        assert!(z4.freeze(0, 2, &[1]).is_err());
        assert!(z4.freeze(1, 0, &[1]).is_err());
    }

    #[test]
    fn duo_examples() {
        let z5 = FiniteAlgebra::cyclic_add(5);
        let d = z5.duo_closure();
        assert_eq!(d.len(), 5);
        for t in 0..5 {
            assert!(d.contains(&(0..5).map(|x| (x + t) % 5).collect::<Vec<_>>()));
        }
        let z6 = FiniteAlgebra::cyclic_mul(6);
        let d = z6.duo_closure();
        let homs: BTreeSet<Unary> = (0..6).map(|a| (0..6).map(|x| a * x % 6).collect()).collect();
        assert_eq!(d.iter().cloned().collect::<BTreeSet<_>>(), homs);
        assert_eq!(FiniteAlgebra::identity_only(3).duo_closure(), vec![vec![0, 1, 2]]);
        assert!(z5.duo_closure_capped(3).is_err());
    }

    #[test]
    fn gen_examples() {
        assert_eq!(FiniteAlgebra::cyclic_add(5).gen_set(2), vec![0, 1, 2, 3, 4]);
        let suc = FiniteAlgebra::new(4).with_op(1, vec![1, 2, 3, 3]).unwrap();
        assert_eq!(suc.gen_set(1), vec![1, 2, 3]);
        assert_eq!(FiniteAlgebra::identity_only(3).gen_set(1), vec![1]);
    }

    #[test]
    fn congruence_examples() {
        let z4 = FiniteAlgebra::cyclic_add(4);
        assert!(z4.is_congruence(&Partition::discrete(4)));
        assert!(z4.is_congruence(&Partition::full(4)));
        assert!(z4.is_congruence(&Partition::from_blocks(4, &[&[0, 2], &[1, 3]]).unwrap()));
        assert!(!z4.is_congruence(&Partition::from_blocks(4, &[&[0, 1], &[2, 3]]).unwrap()));
        let z6 = FiniteAlgebra::cyclic_add(6);
        assert_eq!(
            z6.principal_congruence(0, 2),
            Partition::from_blocks(6, &[&[0, 2, 4], &[1, 3, 5]]).unwrap()
        );
        assert_eq!(z6.all_congruences().len(), 4);
        assert_eq!(z6.all_congruences(), z6.all_congruences_brute_force());
        assert_eq!(FiniteAlgebra::identity_only(2).all_congruences().len(), 2);
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(all_partitions(n).len(), b);
        }
    }

    #[test]
    fn preorder_examples() {
        let z3 = FiniteAlgebra::cyclic_add(3);
        assert_eq!(z3.all_stable_preorders().unwrap(), vec![BinRel::identity(3), BinRel::full(3)]);
        let two = FiniteAlgebra::identity_only(2);
        assert_eq!(two.all_stable_preorders().unwrap().len(), 4);
        assert_eq!(FiniteAlgebra::identity_only(1).all_stable_preorders().unwrap().len(), 1);
        assert!(FiniteAlgebra::identity_only(6).all_stable_preorders().is_err());
        assert_eq!(FiniteAlgebra::identity_only(5).all_stable_preorders().unwrap().len(), 6942);
        assert_eq!(FiniteAlgebra::identity_only(3).all_stable_preorders().unwrap().len(), 29);
    }

    #[test]
    fn syntactic_examples() {
        let z6 = FiniteAlgebra::cyclic_add(6);
        assert_eq!(z6.syntactic_congruence(&[false; 6]).unwrap(), Partition::full(6));
        assert_eq!(z6.syntactic_preorder(&[false; 6]).unwrap(), BinRel::full(6));
        assert_eq!(
            z6.syntactic_congruence(&subset(6, &[0, 3])).unwrap(),
            Partition::from_blocks(6, &[&[0, 3], &[1, 4], &[2, 5]]).unwrap()
        );
        let l = subset(6, &[0, 3]);
        let syn = z6.syntactic_congruence(&l).unwrap();
        for p in z6.all_congruences() {
            if p.saturates(&l) {
                assert!(p.refines(&syn));
            }
        }
    }

    #[test]
    fn preservation_examples() {
        let z4 = FiniteAlgebra::cyclic_add(4);
        for g in z4.duo_closure() {
            assert!(z4.preserves_all_congruences(&g).unwrap());
            assert!(z4.preserves_all_stable_preorders(&g).unwrap());
        }
        assert!(FiniteAlgebra::identity_only(2).preserves_all_congruences(&[1, 0]).unwrap());
        assert!(z4.preserves_all_congruences(&[0, 1, 0, 1]).unwrap());
    }

    #[test]
    fn quotient_and_induced() {
        let z6 = FiniteAlgebra::cyclic_add(6);
        let p = Partition::from_blocks(6, &[&[0, 2, 4], &[1, 3, 5]]).unwrap();
        assert_eq!(z6.quotient(&p).unwrap(), FiniteAlgebra::cyclic_add(2));
        let sq: Unary = (0..6).map(|x| x * x % 6).collect();
        for c in z6.all_congruences() {
            assert!(matches!(z6.induced_function(&sq, &c).unwrap(), Induced::Defined(_)));
        }
        // 0 and 2 share a class, images 0 and 1 do not
        let bad = vec![0, 1, 1, 3, 4, 5];
        assert_eq!(z6.induced_function(&bad, &p).unwrap(), Induced::IllDefined { x: 0, y: 2 });
        let nc = Partition::from_blocks(6, &[&[0, 1], &[2, 3, 4, 5]]).unwrap();
        assert!(z6.quotient(&nc).is_err());
    }

    #[test]
    fn decompositions() {
        let z6 = FiniteAlgebra::cyclic_add(6);
        let l = subset(6, &[1, 4, 5]);
        let id: Unary = (0..6).collect();
        assert_eq!(z6.decompose_preimage_lattice(&id, &l).unwrap(), l);
        assert_eq!(z6.decompose_preimage_boolean(&id, &l).unwrap(), l);
        // on a bare 3-element set, ≤_L is just inclusion in L; a function
        // pulling a point of L onto a point outside breaks the formula
        let bare = FiniteAlgebra::identity_only(3);
        let l = subset(3, &[0]);
        let f = vec![1, 0, 1];
        let direct: Vec<bool> = f.iter().map(|&y| l[y]).collect();
        let dec = bare.decompose_preimage_lattice(&f, &l).unwrap();
        assert_ne!(dec, direct);
        assert!(!bare.preserves(&f, &bare.syntactic_preorder(&l).unwrap()).unwrap());
    }

    #[test]
    fn groups() {
        let z4 = FiniteAlgebra::cyclic_add(4);
        assert_eq!(z4.stable_orders_of_group(0).unwrap(), vec![BinRel::identity(4)]);
        let klein = FiniteAlgebra::new(4).with_op(2, (0..16).map(|i| (i / 4) ^ (i % 4)).collect()).unwrap();
        assert_eq!(klein.stable_orders_of_group(0).unwrap(), vec![BinRel::identity(4)]);
        let triv = FiniteAlgebra::new(1).with_op(2, vec![0]).unwrap();
        assert_eq!(triv.stable_orders_of_group(0).unwrap(), vec![BinRel::identity(1)]);
        assert!(FiniteAlgebra::cyclic_mul(4).stable_orders_of_group(0).is_err());
    }

    #[test]
    fn cancellation() {
        // ℤ/5ℤ units, element i stands for i + 1
        let units = FiniteAlgebra::new(4)
            .with_op(2, (0..16).map(|i| ((i / 4 + 1) * (i % 4 + 1) % 5) - 1).collect())
            .unwrap();
        assert_eq!(
            units.cancellative_to_group(0).unwrap(),
            Cancellation::Group { unit: 0, inverse: vec![0, 2, 1, 3] }
        );
        let max = FiniteAlgebra::new(2).with_op(2, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(
            max.cancellative_to_group(0).unwrap(),
            Cancellation::NotCancellable { x: 0, y: 1, z: 1, right: true }
        );
        let sub = FiniteAlgebra::new(3).with_op(2, (0..9).map(|i| (3 + i / 3 - i % 3) % 3).collect()).unwrap();
        assert!(matches!(sub.cancellative_to_group(0).unwrap(), Cancellation::NotAssociative { .. }));
    }

    #[test]
    fn stable_direct_agrees_on_reflexive() {
        let z4 = FiniteAlgebra::cyclic_add(4);
        for r in [BinRel::identity(4), BinRel::full(4), Partition::from_blocks(4, &[&[0, 2], &[1, 3]]).unwrap().to_rel()] {
            assert!(z4.is_stable_direct(&r));
            assert!(z4.is_stable(&r));
        }
        let lt = BinRel::from_pairs(4, &[(0, 1)]);
        assert!(!z4.is_stable(&lt));
        assert!(FiniteAlgebra::identity_only(4).is_stable(&lt));
    }

    #[test]
    fn json() {
        let z3 = FiniteAlgebra::cyclic_add(3);
        let s = serde_json::to_string(&z3).unwrap();
        assert_eq!(serde_json::from_str::<FiniteAlgebra>(&s).unwrap(), z3);
        assert!(serde_json::from_str::<FiniteAlgebra>(r#"{"n":2,"ops":[{"arity":2,"table":[0,1,1]}]}"#).is_err());
        assert!(serde_json::from_str::<FiniteAlgebra>(r#"{"n":2,"ops":[{"arity":1,"table":[0,2]}]}"#).is_err());
    }
}
