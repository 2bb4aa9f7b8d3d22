//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the public API.
///
/// Formula-level inconsistencies (a closed form failing an exact division,
/// an unsolvable congruence in a construction that guarantees solvability)
/// are reported as [`Error::Internal`]: they indicate a broken invariant,
/// never a recoverable input problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument that must be a positive integer was zero.
    #[error("argument must be >= 1, got 0")]
    ZeroArgument,

    /// An argument was outside the documented domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation would exceed the configured memory or size budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A group order is above the oracle's configured bound.
    #[error("group order {order} exceeds the oracle bound {bound}")]
    OracleBound { order: u128, bound: u128 },

    /// A subgroup key failed validation against its ambient group.
    #[error("invalid subgroup key: {0}")]
    InvalidKey(String),

    /// The least-squares design matrix is numerically singular.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    /// An internal consistency check failed.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
