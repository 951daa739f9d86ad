use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the callee's domain (negative potential,
    /// probability outside `[0, 1)`, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A model parameter violates its constraints (non-finite value,
    /// decay exponent below 1, ...).
    #[error("config error: {0}")]
    Config(String),
    /// A numeric routine failed to converge within its budget.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A query fell outside the data covered by a trace.
    #[error("range error: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
