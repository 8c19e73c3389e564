//! Exact fraction-free LSU factorization over commutative domains.
//!
//! [`lsu::lsu_factor`] computes `α·L·S·U = A` for a square matrix of
//! power-of-two size over a domain `R`, with `L`, `U` triangular over `R` and
//! `S` a weighted permutation over the quotient field, together with `M`,
//! `W` and `Ŝ` such that `L·Ŝ·M = I` and `W·Ŝ·U = I`.

pub mod error;
pub mod linalg;
pub mod lsu;
pub mod matrix;
pub mod oracle;
pub mod ring;
pub mod serial;
pub mod wperm;

pub use error::{Error, Result};
pub use lsu::{lsu_factor, lsu_factor_any, recover_minors, LsuFactors};
pub use matrix::{DMatrix, MulStrategy, OpCounter};
pub use ring::{BigInt, BigRational, Frac, QPoly, RingKind};
pub use wperm::WPerm;
