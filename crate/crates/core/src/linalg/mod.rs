//! Exact rational linear algebra.
//!
//! Scalars are [`num::BigRational`], which is always kept in lowest terms with
//! a positive denominator. Nothing in this module touches floating point.

mod matrix;
mod padic;
pub(crate) mod poly;

pub use matrix::QMatrix;
pub use padic::{is_prime, padic_valuation, Valuation};
pub use poly::{char_poly, newton_polygon, poly_eval_matrix, NewtonPolygon};

use num::{BigInt, BigRational};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ragged rows: expected {expected} columns, row {row} has {found}")]
    RaggedRows {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("zero constant term gives an infinite slope")]
    ZeroConstantTerm,
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}
