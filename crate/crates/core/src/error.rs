//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Shape of an input does not match the game it is used with.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },

    /// A vector that must be a probability distribution is not one.
    #[error("{what} is not a probability distribution (sum {sum}, min entry {min})")]
    InvalidDistribution { what: String, sum: f64, min: f64 },

    /// Operation requires a canonical experiment (messages = actions).
    #[error("experiment is not canonical ({what}); canonicalize it first")]
    NotCanonical { what: String },

    /// Payoff or parameter outside the domain of an ambiguity attitude.
    #[error("attitude domain error: {what}")]
    AttitudeDomain { what: String },

    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {what}")]
    Precondition { what: String },

    /// Input configuration the toolkit does not handle.
    #[error("unsupported: {what}")]
    Unsupported { what: String },

    /// The LP solver reported a non-optimal status where optimality was required.
    #[error("linear program failed: {what}")]
    LpFailure { what: String },

    /// Iterative solver did not converge within its budget.
    #[error("no convergence: {what}")]
    NoConvergence { what: String },

    /// Internal invariant broken (a bug, not a user error).
    #[error("internal error: {what}")]
    Internal { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn dim(context: impl Into<String>, expected: usize, got: usize) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected,
            got,
        }
    }

    pub fn precondition(what: impl Into<String>) -> Self {
        Error::Precondition { what: what.into() }
    }
}
