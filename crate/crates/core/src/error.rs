use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-supplied value violates a stated contract (e.g. a Pell identity).
    #[error("contract violation: {0}")]
    Contract(String),
    /// Points or curves collapse in a way the computation cannot proceed from.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// An operation's precondition is not met; the message says which call fixes it.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The prime divides the leading coefficient, so reduction loses degree.
    #[error("prime {0} rejected: leading coefficient vanishes")]
    RejectedPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
