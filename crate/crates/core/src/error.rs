//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by weylres.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("exponent or degree overflow (max {0})")]
    DegreeOverflow(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational {0} has no image in the prime field")]
    NotRepresentable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("computation budget exceeded after {0} reduction steps")]
    BudgetExceeded(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
