use thiserror::Error;

/// Errors raised by group construction and the numerical operations built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group needs at least one invariant factor")]
    EmptyFactors,
    #[error("invariant factor {factor} at position {index} is below 2")]
    FactorTooSmall { index: usize, factor: usize },
    #[error("group order exceeds {limit} at factor {factor} (position {index})")]
    OrderOverflow {
        index: usize,
        factor: usize,
        limit: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("degenerate weight function: {0}")]
    DegenerateWeight(String),
    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
