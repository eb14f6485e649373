//! Dual Bernstein polynomials with respect to the shifted Jacobi weight
//! `(1-x)^α x^β` on `[0,1]`.
//!
//! The main entry points are [`dual::dual_all_at_point`] and
//! [`dual::DualEvaluator`], which compute all `n+1` dual polynomials at a
//! point in `O(n)` operations. Everything is generic over [`Real`], so the
//! same code runs in `f64` and in the multiprecision [`BigFloat`].

pub mod bernstein;
pub mod bigfloat;
pub mod cli;
pub mod ddouble;
pub mod dual;
pub mod error;
pub mod jacobi;
pub mod projection;
pub mod real;
pub mod reference;
pub mod special;

pub use bigfloat::BigFloat;
pub use dual::{dual_all_at_point, dual_all_multi, DualEvaluator, DualTable};
pub use error::{Error, Result};
pub use jacobi::WeightParams;
pub use real::{Bits, Real};
