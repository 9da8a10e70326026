use thiserror::Error;

use crate::combinatorics::UserSubset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("binomial coefficient binom({n}, {m}) overflows u64")]
    Overflow { n: u64, m: u64 },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("randomness has {got} symbols, expected {expected}")]
    RandomnessLength { expected: usize, got: usize },

    #[error("expected {expected} shares for reconstruction, got {got}")]
    MissingShares { expected: usize, got: usize },

    #[error("secrecy certificate needs exactly {expected} distinct share indices: {reason}")]
    CertificateSubset { expected: usize, reason: String },

    #[error("invalid demand vector: {0}")]
    InvalidDemand(String),

    #[error("no transmission available for subset {0}")]
    MissingTransmission(UserSubset),

    #[error("transmission for subset {0} carries a key and cannot be combined")]
    KeyedTransmission(UserSubset),

    #[error("subset {0} is not a saved subset in this delivery")]
    NotSaved(UserSubset),

    #[error("cache of user {user} does not hold {item}")]
    NotCached { user: usize, item: String },

    #[error("exact enumeration needs {needed} demand vectors, over the budget of {budget}; use monte-carlo mode")]
    BudgetExceeded { needed: u128, budget: u128 },
}
