//! Exact rational scalars, row vectors and square matrices.
//!
//! Everything uses the row-vector convention: a vector `v` is transformed as
//! `v · M`. There is deliberately no matrix-times-column-vector entry point.

mod matrix;
mod rational;

use thiserror::Error;

pub use matrix::{elementary_matrix, mat_mul, swap_matrix, vec_mat_mul, RowVector, SquareMatrix};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square: {rows} rows but a row of length {columns}")]
    NotSquare { rows: usize, columns: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("index {index} out of range for dimension {dim} (indices are 1-based)")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
