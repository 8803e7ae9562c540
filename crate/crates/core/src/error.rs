use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    /// Enumeration would visit more nodes than the configured budget allows.
    #[error("enumeration budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    /// An exact division that must be exact was not (corrupted transform or table).
    #[error("inexact division: {0}")]
    Inexact(String),

    #[error("quadrature did not converge (achieved error estimate {estimate:e})")]
    Quadrature { estimate: f64 },

    /// An internal identity failed; indicates a bug rather than bad input.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Inexact(_) => "inexact",
            Error::Quadrature { .. } => "quadrature",
            Error::Invariant(_) => "invariant",
        }
    }
}
