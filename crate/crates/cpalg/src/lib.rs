//! Congruence-preserving functions, recognizable sets and their lattices,
//! over ℕ, ℤ, (ℕ,×), ℤ_p and finite algebras.

pub mod bigjson;
pub mod error;
pub mod exactint;
pub mod exotic;
pub mod finalg;
pub mod fryingpan;
pub mod latgen;
pub mod natint;
pub mod padic;
pub mod recsets;

pub use error::{Error, Result};
