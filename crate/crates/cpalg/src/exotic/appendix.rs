//! Incremental builder for the CRT-defined function F with
//! F(0) = 0, F(1) = F(2) = 2 and F(2^n - 1) ≡ 0 (mod 2^n).
//!
//! For x >= 3 the constraints F(x) ≡ F(x - d) (mod d), d = 1..x, collapse to
//! one congruence per prime p <= x, modulo p^a with p^a <= x < p^(a+1):
//! F(x) ≡ F(x - p^a). The builder keeps every value's residue modulo the
//! largest prime power below the window end, so each step needs no big
//! reductions beyond two product trees.
//!
//! Residues for primes with p^2 > x_max are stored only for arguments
//! below p: once F is pairwise divisible on 0..x-1, F(x - p) ≡ F(x mod p)
//! (mod p).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::exactint::{mod_inverse_u64, primes_upto};

/// Per-step certificate counters collected while building.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    /// Number of (x, p) reduced constraints re-checked on the final value.
    pub prime_constraints_checked: u64,
    /// Arguments x = 2^n - 1 whose value was checked to vanish mod 2^n.
    pub power_of_two_checks: u32,
}

enum Narrow {
    U16(Vec<Vec<u16>>),
    U32(Vec<Vec<u32>>),
}

impl Narrow {
    fn get(&self, slot: usize, y: usize) -> u64 {
        match self {
            Narrow::U16(t) => t[slot][y] as u64,
            Narrow::U32(t) => t[slot][y] as u64,
        }
    }

    fn set(&mut self, slot: usize, y: usize, v: u64) {
        match self {
            Narrow::U16(t) => t[slot][y] = v as u16,
            Narrow::U32(t) => t[slot][y] = v as u32,
        }
    }
}

/// Consecutive primes grouped so that the product of their top powers fits a u64.
struct Chunk {
    start: usize,
    end: usize,
    top: u64,
}

/// Segment tree of products over chunks.
struct ProductTree {
    size: usize,
    nodes: Vec<BigUint>,
}

/// Precomputed reciprocal for repeated reduction by a fixed modulus.
struct Barrett {
    bits: u64,
    mu: BigUint,
}

impl Barrett {
    fn new(p: &BigUint) -> Self {
        let bits = p.bits();
        let mu = (BigUint::one() << (2 * bits)) / p;
        Barrett { bits, mu }
    }

    /// v mod p, valid for v < 2^(2 bits).
    fn reduce(&self, v: &BigUint, p: &BigUint) -> BigUint {
        let q = ((v >> (self.bits - 1)) * &self.mu) >> (self.bits + 1);
        let mut r = v - q * p;
        while &r >= p {
            r -= p;
        }
        r
    }
}

impl ProductTree {
    fn new(leaves: &[u64]) -> Self {
        let size = leaves.len().next_power_of_two().max(1);
        let mut nodes = vec![BigUint::one(); 2 * size];
        for (i, &v) in leaves.iter().enumerate() {
            nodes[size + i] = BigUint::from(v);
        }
        for n in (1..size).rev() {
            nodes[n] = &nodes[2 * n] * &nodes[2 * n + 1];
        }
        ProductTree { size, nodes }
    }

    fn set(&mut self, leaf: usize, v: u64) {
        let mut n = self.size + leaf;
        self.nodes[n] = BigUint::from(v);
        while n > 1 {
            n /= 2;
            self.nodes[n] = &self.nodes[2 * n] * &self.nodes[2 * n + 1];
        }
    }

    fn root(&self) -> &BigUint {
        &self.nodes[1]
    }
}

pub(crate) struct AppendixBuilder {
    x_max: usize,
    primes: Vec<u64>,
    top: Vec<u64>,
    n_small: usize,
    chunks: Vec<Chunk>,
    // residue of F(y) mod top[j] for small primes, flattened by y
    small_res: Vec<u64>,
    // residue of F(y) mod p for large primes, y < p
    large_res: Narrow,
    small_chunks: usize,
    small_product: BigUint,
    rem_tree: ProductTree,
    rem_fast: Vec<Option<Barrett>>,
    crt_tree: ProductTree,
    modulus: Vec<u64>,
    inv: Vec<u64>,
    active: usize,
    scratch: Vec<u64>,
    pub(crate) values: Vec<BigInt>,
    pub(crate) report: BuildReport,
}

impl AppendixBuilder {
    pub(crate) fn new(x_max: u64) -> Result<Self> {
        if x_max < 3 {
            return Err(Error::Domain(format!("x_max must be >= 3, got {x_max}")));
        }
        if x_max > u32::MAX as u64 {
            return Err(Error::Bound(format!("x_max {x_max} too large")));
        }
        let primes = primes_upto(x_max);
        let top: Vec<u64> = primes
            .iter()
            .map(|&p| {
                let mut q = p;
                while q <= x_max / p {
                    q *= p;
                }
                q
            })
            .collect();
        let n_small = primes.iter().take_while(|&&p| p * p <= x_max).count();
        let mut chunks = Vec::new();
        let mut i = 0;
        while i < primes.len() {
            let start = i;
            let mut prod: u64 = 1;
            while i < primes.len() && (i != n_small || i == start) {
                match prod.checked_mul(top[i]) {
                    Some(v) if v < (1u64 << 63) => {
                        prod = v;
                        i += 1;
                    }
                    _ => break,
                }
            }
            chunks.push(Chunk { start, end: i, top: prod });
        }
        // chunks never mix small and large primes
        let small_chunks = chunks.iter().take_while(|c| c.start < n_small).count();
        let small_product: BigUint = chunks[..small_chunks].iter().map(|c| BigUint::from(c.top)).product();
        let rem_tree = ProductTree::new(&chunks.iter().map(|c| c.top).collect::<Vec<_>>());
        let rem_fast = rem_tree
            .nodes
            .iter()
            .map(|p| (p.bits() > BARRETT_MIN_BITS).then(|| Barrett::new(p)))
            .collect();
        let crt_tree = ProductTree::new(&vec![1; chunks.len()]);
        let large = &primes[n_small..];
        let large_res = if x_max <= u16::MAX as u64 {
            Narrow::U16(large.iter().map(|&p| vec![0u16; p.min(x_max + 1 - p) as usize]).collect())
        } else {
            Narrow::U32(large.iter().map(|&p| vec![0u32; p.min(x_max + 1 - p) as usize]).collect())
        };
        let np = primes.len();
        let mut b = AppendixBuilder {
            x_max: x_max as usize,
            primes,
            top,
            n_small,
            chunks,
            small_res: Vec::with_capacity((x_max as usize + 1) * n_small),
            large_res,
            small_chunks,
            small_product,
            rem_tree,
            rem_fast,
            crt_tree,
            modulus: vec![1; np],
            inv: vec![0; np],
            active: 0,
            scratch: vec![0; np],
            values: Vec::with_capacity(x_max as usize + 1),
            report: BuildReport::default(),
        };
        for seed in [0u32, 2, 2] {
            b.push(BigInt::from(seed));
        }
        Ok(b)
    }

    /// Build every value up to `x_max`.
    pub(crate) fn run(mut self) -> Result<(Vec<BigInt>, BuildReport)> {
        self.advance_moduli(2);
        for x in 3..=self.x_max {
            self.advance_moduli(x as u64);
            self.step(x)?;
        }
        Ok((self.values, self.report))
    }

    /// Update prime-power moduli for argument x (x = p^j raises p's modulus).
    fn advance_moduli(&mut self, x: u64) {
        let Some(i) = prime_power_base(x, &self.primes) else { return };
        let p = self.primes[i];
        if i == self.active {
            self.active += 1;
        }
        self.modulus[i] = x;
        for j in 0..self.active {
            if j != i && self.modulus[j] > 1 {
                let m = self.modulus[j];
                let pinv = mod_inverse_u64(p % m, m).expect("distinct primes");
                self.inv[j] = mulmod(self.inv[j], pinv, m);
            }
        }
        let mut rest = 1u64;
        for j in 0..self.active {
            if j != i {
                rest = mulmod(rest, self.modulus[j] % x, x);
            }
        }
        self.inv[i] = mod_inverse_u64(rest, x).expect("coprime moduli");
        let c = self.chunk_of(i);
        let prod = (self.chunks[c].start..self.chunks[c].end).map(|j| self.modulus[j]).product();
        self.crt_tree.set(c, prod);
    }

    fn chunk_of(&self, i: usize) -> usize {
        self.chunks.partition_point(|c| c.end <= i)
    }

    fn step(&mut self, x: usize) -> Result<()> {
        let xs = x as u64;
        let mut targets = std::mem::take(&mut self.scratch);
        for (i, t) in targets.iter_mut().enumerate().take(self.active) {
            *t = self.constraint_residue(x, i);
        }
        // offsets (r_i - x) * inv_i mod m_i
        let mut e = vec![0u64; self.active];
        for i in 0..self.active {
            let m = self.modulus[i];
            let shifted = (targets[i] + m - xs % m) % m;
            e[i] = mulmod(shifted, self.inv[i], m);
        }
        let sum = self.crt_sum(1, &e).unwrap_or_default();
        let big_m = self.crt_tree.root();
        let mut value = BigUint::from(xs) + sum % big_m;
        let mut pow2_check = None;
        if (x + 1).is_power_of_two() {
            let n = (x + 1).trailing_zeros() as u64;
            let low = &value & ((BigUint::one() << n) - 1u32);
            if !low.is_zero() {
                value += big_m;
            }
            pow2_check = Some(n);
        }
        let value = BigInt::from(value);
        if let Some(n) = pow2_check {
            let low: BigInt = &value & ((BigInt::one() << n) - 1);
            if !low.is_zero() {
                return Err(Error::Invariant(format!("F({x}) is not divisible by 2^{n}")));
            }
            self.report.power_of_two_checks += 1;
        }
        let res = self.push(value);
        let value = &self.values[x];
        let spot = (x * 2654435761) % self.active.max(1);
        let mut checked = 0;
        for i in 0..self.active {
            let m = self.modulus[i];
            let got = if i < self.n_small {
                res[i] % m
            } else if i == spot || i + 1 == self.active {
                (value.magnitude() % m).to_u64().unwrap_or(u64::MAX)
            } else {
                continue;
            };
            if got != targets[i] {
                return Err(Error::Invariant(format!(
                    "F({x}) violates its constraint modulo {m}"
                )));
            }
            checked += 1;
        }
        self.report.prime_constraints_checked += checked;
        self.scratch = targets;
        Ok(())
    }

    /// F(x - m_i) mod m_i from the stored residues.
    fn constraint_residue(&self, x: usize, i: usize) -> u64 {
        let m = self.modulus[i];
        if i < self.n_small {
            let y = x - m as usize;
            self.small_res[y * self.n_small + i] % m
        } else {
            let p = self.primes[i] as usize;
            self.large_res.get(i - self.n_small, x % p)
        }
    }

    /// Σ e_i · (M / m_i) over active leaves below `node`.
    fn crt_sum(&self, node: usize, e: &[u64]) -> Option<BigUint> {
        let size = self.crt_tree.size;
        let (lo, _) = node_range(node, size);
        if lo >= self.chunks.len() || self.chunks[lo].start >= self.active {
            return None;
        }
        if node >= size {
            let c = &self.chunks[lo];
            let end = c.end.min(self.active);
            let prod: u64 = (c.start..c.end).map(|j| self.modulus[j]).product();
            let mut acc: u128 = 0;
            for j in c.start..end {
                let cof = prod / self.modulus[j];
                acc += e[j] as u128 * cof as u128;
            }
            return Some(BigUint::from(acc));
        }
        let l = self.crt_sum(2 * node, e);
        let r = self.crt_sum(2 * node + 1, e);
        let pl = &self.crt_tree.nodes[2 * node];
        let pr = &self.crt_tree.nodes[2 * node + 1];
        match (l, r) {
            (None, None) => None,
            (Some(a), None) => Some(a * pr),
            (None, Some(b)) => Some(b * pl),
            (Some(a), Some(b)) => Some(a * pr + b * pl),
        }
    }

    /// Append F(y) and record the residues later steps will read.
    /// Returns residues modulo each small prime's top power.
    fn push(&mut self, value: BigInt) -> Vec<u64> {
        let y = self.values.len();
        let x_max = self.x_max;
        // large primes q with y < q <= x_max - y are the only ones that will
        // ever read F(y) mod q
        let q_lo = self.primes.partition_point(|&p| p as usize <= y).max(self.n_small);
        let q_hi = self.primes.partition_point(|&p| p as usize + y <= x_max).max(q_lo);
        let mut res = vec![0u64; self.primes.len()];
        let small = value.magnitude() % &self.small_product;
        for c in &self.chunks[..self.small_chunks] {
            let r = (&small % c.top).to_u64().expect("reduced below a u64");
            for j in c.start..c.end {
                res[j] = r % self.top[j];
            }
        }
        if q_hi > q_lo {
            let wanted = (self.chunk_of(q_lo), self.chunk_of(q_hi - 1) + 1);
            self.residues(1, Cow::Borrowed(value.magnitude()), wanted, &mut res);
        }
        self.small_res.extend_from_slice(&res[..self.n_small]);
        for i in q_lo..q_hi {
            self.large_res.set(i - self.n_small, y, res[i]);
        }
        self.values.push(value);
        res.truncate(self.n_small);
        res
    }

    fn residues(&self, node: usize, v: Cow<'_, BigUint>, wanted: (usize, usize), out: &mut [u64]) {
        let size = self.rem_tree.size;
        let (lo, hi) = node_range(node, size);
        if hi <= wanted.0 || wanted.1 <= lo {
            return;
        }
        let prod = &self.rem_tree.nodes[node];
        let v = if v.as_ref() < prod {
            v
        } else {
            match &self.rem_fast[node] {
                Some(b) if v.bits() <= 2 * b.bits => Cow::Owned(b.reduce(v.as_ref(), prod)),
                _ => Cow::Owned(v.as_ref() % prod),
            }
        };
        if node >= size {
            let c = &self.chunks[lo];
            let r = (v.as_ref() % c.top).to_u64().expect("reduced below a u64");
            for j in c.start..c.end {
                out[j] = r % self.top[j];
            }
            return;
        }
        self.residues(2 * node, Cow::Borrowed(v.as_ref()), wanted, out);
        self.residues(2 * node + 1, v, wanted, out);
    }
}


const BARRETT_MIN_BITS: u64 = 4096;

fn node_range(node: usize, size: usize) -> (usize, usize) {
    let depth = usize::BITS - 1 - node.leading_zeros();
    let span = size >> depth;
    let lo = (node - (1 << depth)) * span;
    (lo, lo + span)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Index of p in `primes` when x = p^j with j >= 1.
fn prime_power_base(x: u64, primes: &[u64]) -> Option<usize> {
    if x < 2 {
        return None;
    }
    let mut p = 0;
    for &q in primes {
        if q * q > x {
            break;
        }
        if x.is_multiple_of(q) {
            p = q;
            break;
        }
    }
    if p == 0 {
        return primes.binary_search(&x).ok();
    }
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
    }
    if y == 1 {
        primes.binary_search(&p).ok()
    } else {
        None
    }
}

/// Reference construction: merge all x constraints pairwise with plain CRT.
/// Quadratic in the window; used to cross-check the builder.
#[cfg(test)]
pub(crate) fn naive(x_max: u64) -> Result<Vec<BigInt>> {
    use crate::exactint::{crt_merge, ResidueConstraint};
    let mut f: Vec<BigInt> = vec![0.into(), 2.into(), 2.into()];
    for x in 3..=x_max as usize {
        let mut acc = ResidueConstraint::trivial();
        for d in 1..=x {
            let c = ResidueConstraint::new(f[x - d].clone(), BigInt::from(d))?;
            acc = crt_merge(&acc, &c).map_err(|e| Error::Invariant(e.to_string()))?;
        }
        if (x + 1).is_power_of_two() {
            let c = ResidueConstraint::new(BigInt::zero(), BigInt::from(x + 1))?;
            acc = crt_merge(&acc, &c).map_err(|e| Error::Invariant(e.to_string()))?;
        }
        f.push(acc.smallest_at_least(&BigInt::from(x)));
    }
    Ok(f)
}
