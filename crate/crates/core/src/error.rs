use thiserror::Error;

/// Error kinds shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Unsupported or inconsistent configuration (family/rank combination,
    /// non-integral Frobenius shift pairings, twist not normalizing a pattern).
    #[error("configuration error: {0}")]
    Config(String),

    /// Precondition on an operation's arguments violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Ring arithmetic failure (inverting a non-unit).
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// Element does not satisfy the membership predicate required here.
    #[error("membership error: {0}")]
    Membership(String),

    /// An enumeration or search exceeded its configured budget.
    #[error("resource error: {what} exceeded budget {budget} (partial count {partial})")]
    Resource {
        what: String,
        budget: u64,
        partial: u64,
    },

    /// Internal invariant violated; indicates a bug, treated as fatal.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
