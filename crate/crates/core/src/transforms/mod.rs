//! Language-preserving conversions between machine models.

mod normalize;
mod pausing;
mod primes;
mod weighted;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::machine::ModelError;

pub use normalize::{normalize_check_entry, normalize_check_value, normalize_check_value_multiplicative};
pub use pausing::famw_to_rtdbva1;
pub use primes::{
    counter_machine_to_dva1, dva1_to_counter_machine, factor_base, first_primes, prime_exponents,
};
pub use weighted::{dbva_to_tufa, tufa_to_dbva};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("transform does not apply: {0}")]
    NotApplicable(String),
    #[error("cannot represent: {0}")]
    NotRepresentable(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn not_applicable<T>(msg: impl Into<String>) -> Result<T, TransformError> {
    Err(TransformError::NotApplicable(msg.into()))
}
