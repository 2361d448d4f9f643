//! Exact arithmetic substrate: big rationals, Gaussian rationals,
//! cyclotomic numbers, rational matrices and positive-definite
//! quadratic-form utilities.

mod cyclotomic;
mod gaussian;
mod matrix;
mod quadform;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CyclotomicJson, CyclotomicNumber};
pub use gaussian::GaussRat;
pub use matrix::{
    p_adic_membership, rat_from_str, rat_to_f64, rat_to_str, rat_valuation, RationalMatrix,
};
pub use quadform::{
    automorph_group, lattice_solutions, minkowski_reduce, reduced_binary_forms, SymPosDef,
};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for integers as rationals.
pub fn rint(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}
