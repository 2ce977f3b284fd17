use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A certified truncation would need more terms than the budget allows.
    #[error("budget exceeded while summing {what}: {needed} terms needed, max_terms = {max_terms}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        max_terms: u64,
    },

    /// A density evaluation needs more convolution-power columns than were built.
    #[error("x = {x} needs table depth {needed}, table has depth {depth}")]
    OutOfTable { x: f64, needed: usize, depth: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Exhaustive enumeration requested beyond its hard size limit.
    #[error("size limit: {0}")]
    SizeLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
