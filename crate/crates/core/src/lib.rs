//! Numerical laboratory for anisotropic summability of bilinear and
//! multilinear forms on finite-dimensional lp spaces.
//!
//! The crate has five layers:
//!
//! - [`exponents`]: exact rational exponent arithmetic, the admissibility
//!   classifier for anisotropic pairs, blow-up region labels and rates, and
//!   every closed-form exponent map.
//! - [`tensor`]: dense order-m coefficient arrays with nested mixed norms,
//!   plus checked Minkowski and interpolative Holder inequalities.
//! - [`forms`]: multilinear forms over lp balls, the row/diagonal witness
//!   families with closed-form norms, and seeded random generators.
//! - [`optnorm`]: certified lower bounds on form norms by alternating exact
//!   block maximization, sign-vertex enumeration for sup domains, and weak
//!   lp norms of vector sequences.
//! - [`experiments`]: quotient sweeps, log-log rate fits, random-sign norm
//!   scaling, and verified-or-inconclusive inequality reports.
//!
//! Exponents are exact rationals end to end; floating point enters only when
//! a norm or power is actually evaluated. Every randomized routine is a pure
//! function of its seed.

pub mod error;
pub mod experiments;
pub mod exponents;
pub mod forms;
pub mod optnorm;
pub mod rng;
pub mod tensor;

pub use error::{Error, Result};
pub use exponents::{xexp, XExp};
