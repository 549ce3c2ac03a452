//! Explicit congruence-preserving functions on ℕ: ⌊e·x!⌋, a non-monotone
//! zig-zag function, a CRT lift of any target into a CP function, and the
//! function F with F(0) = 0, F(1) = F(2) = 2, F(2^n - 1) ≡ 0 (mod 2^n).

mod appendix;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactint::{crt_merge, lcm_upto_u64, ResidueConstraint};
use crate::natint::{Domain, FnTable};

pub use appendix::BuildReport;

/// Tables up to this size get the exhaustive pairwise certificate by default.
pub const PAIRWISE_LIMIT: u64 = 4095;

/// `1` at 0, else `Σ_{j ≤ x} x!/j!`, which equals `⌊e·x!⌋` for `x >= 1`.
pub fn floor_e_factorial(x: u64) -> BigInt {
    if x == 0 {
        return BigInt::one();
    }
    let mut sum = BigInt::zero();
    let mut term = BigInt::one();
    for j in (0..=x).rev() {
        sum += &term;
        term *= j.max(1);
    }
    sum
}

/// `Σ_{y ≤ x, y even} 2^{y+2} lcm(y+2) - Σ_{z ≤ x, z odd} 2^z lcm(z)`.
pub fn zigzag_f(x: u64) -> BigInt {
    let mut s = BigInt::zero();
    for y in 0..=x {
        if y % 2 == 0 {
            s += lcm_upto_u64(y + 2) << (y + 2);
        } else {
            s -= lcm_upto_u64(y) << y;
        }
    }
    s
}

/// How pairwise divisibility was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisibilityMethod {
    /// every pair `x > y` of the window checked
    Pairwise,
    /// per-prime reduced constraints, small primes always, large primes sampled
    Reduced,
}

/// A function table with its certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CPWitnessTable {
    pub table: FnTable,
    pub divisibility_verified: bool,
    pub divisibility_method: DivisibilityMethod,
    pub checks: u64,
    /// `f(x) >= x` on the whole window
    pub over_linear: bool,
    /// `f(2^n - 1) ≡ 0 (mod 2^n)` for every such point in the window
    pub power_of_two: Option<bool>,
    /// `target(x) - lcm(1..x) < g(x) <= target(x)` everywhere
    pub window_bound: Option<bool>,
    pub policy: &'static str,
}

impl CPWitnessTable {
    pub fn values(&self) -> &[BigInt] {
        self.table.values()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "table": self.table.to_json(),
            "certificate": {
                "divisibility_verified": self.divisibility_verified,
                "divisibility_method": self.divisibility_method,
                "checks": self.checks,
                "over_linear": self.over_linear,
                "power_of_two": self.power_of_two,
                "window_bound": self.window_bound,
                "policy": self.policy,
            }
        })
    }
}

/// Check `d | f(x) - f(x-d)` for every `d` and `x`, which covers every pair.
/// Returns the number of pairs, or the first failing `(x, y)` by `d`.
pub fn certify_pairwise(values: &[BigInt]) -> std::result::Result<u64, (usize, usize)> {
    let n = values.len();
    let mut pairs = 0u64;
    let mut res = vec![0u64; n];
    for d in 1..n {
        let m = BigInt::from(d);
        for (r, v) in res.iter_mut().zip(values) {
            *r = v.mod_floor(&m).to_u64().expect("residue below d");
        }
        for x in d..n {
            if res[x] != res[x - d] {
                return Err((x, x - d));
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// Wrap any table on ℕ with the pairwise certificate; a failing pair leaves
/// `divisibility_verified` false.
pub fn certify_table(table: FnTable) -> CPWitnessTable {
    let res = certify_pairwise(table.values());
    CPWitnessTable {
        over_linear: over_linear(table.values()),
        divisibility_verified: res.is_ok(),
        checks: res.unwrap_or(0),
        table,
        divisibility_method: DivisibilityMethod::Pairwise,
        power_of_two: None,
        window_bound: None,
        policy: "given",
    }
}

fn over_linear(values: &[BigInt]) -> bool {
    values.iter().enumerate().all(|(x, v)| v >= &BigInt::from(x))
}

/// Lift a target on `0..=hi` to a CP function: at each `x` merge
/// `g(x) ≡ g(x - d) (mod d)` for `d = 1..x` and take the largest solution
/// not above `target(x)`.
pub fn cp_window_lift(target: &FnTable) -> Result<CPWitnessTable> {
    if target.lo() != 0 || target.domain() == Domain::Nx {
        return Err(Error::Precondition("the target window must start at 0 on ℕ".into()));
    }
    let mut g: Vec<BigInt> = Vec::with_capacity(target.len());
    let mut bound_ok = true;
    for (x, t) in target.iter() {
        let x = x as usize;
        let mut c = ResidueConstraint::trivial();
        for d in 1..=x {
            let next = ResidueConstraint::new(g[x - d].clone(), BigInt::from(d))?;
            c = crt_merge(&c, &next).map_err(|e| {
                Error::Invariant(format!("lift at x = {x}: {e} (modulus {d})"))
            })?;
        }
        let v = c.largest_at_most(t);
        if !(&v <= t && t - &v < lcm_upto_u64(x.max(1) as u64)) {
            bound_ok = false;
        }
        g.push(v);
    }
    let checks = certify_pairwise(&g)
        .map_err(|(x, y)| Error::Invariant(format!("lift breaks divisibility at ({x}, {y})")))?;
    let over = over_linear(&g);
    Ok(CPWitnessTable {
        table: FnTable::new(Domain::N, 0, g)?,
        divisibility_verified: true,
        divisibility_method: DivisibilityMethod::Pairwise,
        checks,
        over_linear: over,
        power_of_two: None,
        window_bound: Some(bound_ok),
        policy: "largest solution <= target(x)",
    })
}

/// F on `0..=x_max`, each value the least CRT solution `>= x`.
/// Pairwise certification up to [`PAIRWISE_LIMIT`], reduced above.
pub fn appendix_f(x_max: u64) -> Result<CPWitnessTable> {
    appendix_f_with(x_max, x_max <= PAIRWISE_LIMIT)
}

pub fn appendix_f_with(x_max: u64, pairwise: bool) -> Result<CPWitnessTable> {
    let (values, report) = appendix::AppendixBuilder::new(x_max)?.run()?;
    let (method, checks) = if pairwise {
        let n = certify_pairwise(&values)
            .map_err(|(x, y)| Error::Invariant(format!("F breaks divisibility at ({x}, {y})")))?;
        (DivisibilityMethod::Pairwise, n)
    } else {
        (DivisibilityMethod::Reduced, report.prime_constraints_checked)
    };
    let mut pow2 = true;
    let mut n = 1u32;
    while (1u64 << n) - 1 <= x_max {
        let v = values[(1usize << n) - 1].magnitude();
        if !(v & ((BigUint::one() << n) - 1u32)).is_zero() {
            pow2 = false;
        }
        n += 1;
    }
    let over = over_linear(&values);
    Ok(CPWitnessTable {
        table: FnTable::new(Domain::N, 0, values)?,
        divisibility_verified: true,
        divisibility_method: method,
        checks,
        over_linear: over,
        power_of_two: Some(pow2),
        window_bound: None,
        policy: "least solution >= x",
    })
}
