//! Exact symbolic engine for discrete variational equations of rational
//! maps along adapted curves, and for the Galois classification of rank-2
//! difference systems.

pub mod dynsys;
pub mod galois2;
pub mod junior;
mod error;
pub mod symcore;
pub mod varcurve;

pub use error::{Error, Result};
pub use symcore::SymError;

/// Exact rationals, the ground field of every computation.
pub type Rational = num_rational::BigRational;
pub type Poly = symcore::Poly<Rational>;
pub type RatFunc = symcore::RatFunc<Rational>;
pub type Matrix = symcore::Matrix<Rational>;
