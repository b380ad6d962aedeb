//! Exact linear algebra over ℚ and prime fields.
//!
//! Everything here is a pure function of its inputs: rationals are normalized,
//! pivoting is deterministic, and reduced row-echelon bases are canonical, so
//! results are reproducible bit for bit.

mod matrix;
mod rref;
mod scalar;
mod sparse;

use thiserror::Error;

pub use matrix::Matrix;
pub use rref::{member, nullspace_of, rref, same_span, solve_homogeneous, SubspaceBasis};
pub use scalar::{in_prime_hull, is_prime, Field, Scalar, ScalarText, MAX_PRIME};
pub use sparse::SparseVec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{0} is not an accepted prime modulus")]
    NotPrime(u64),
    #[error("unrecognized field `{0}` (expected `Q` or `Fp:<prime>`)")]
    BadField(String),
    #[error("malformed scalar `{0}`")]
    BadScalar(String),
    #[error("{0} has no image modulo {1}")]
    NotRepresentable(String, u64),
}
