//! Exact linear algebra: rational and integer matrices, ranks over `Q` or a prime field,
//! cohomology of finite cochain complexes, and a small exact feasibility test for linear
//! inequality systems.

mod complex;
mod fm;
mod matrix;

use thiserror::Error;

pub use complex::{cohomology_dims, ChainComplexDims};
pub use fm::LinearSystem;
pub use matrix::{Field, IntegerMatrix, Rational, RationalMatrix, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row {row} has a different length")]
    RaggedRows { row: usize },
    #[error("cannot multiply {left:?} by {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("coboundary {degree} has shape {got:?}, expected {expected:?}")]
    BoundaryShape {
        degree: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("{boundaries} coboundaries for {dims} spaces")]
    TooManyBoundaries { dims: usize, boundaries: usize },
    #[error("d∘d is nonzero starting in degree {degree}")]
    NotAComplex { degree: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown field '{0}' (expected q or fp:<prime>)")]
    BadField(String),
    #[error("a denominator vanishes modulo {0}")]
    DenominatorNotInvertible(u64),
}
