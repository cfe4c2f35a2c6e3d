use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Variants map onto the failure classes the CLI turns into exit codes:
/// configuration/domain problems, numeric failures, and constraint breaches
/// discovered while auditing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value {value} at abscissa {abscissa}")]
    NonFinite { abscissa: f64, value: f64 },

    #[error("domain violation at index {index}: {reason}")]
    DomainAt { index: usize, reason: String },

    #[error("invalid drawdown function: {0}")]
    InvalidDrawdown(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("linear algebra: {0}")]
    LinearAlgebra(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("non-linear growth: {0}")]
    NonLinearFit(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid estimate: {0}")]
    InvalidEstimate(String),
}

impl Error {
    /// True for failures of the numerics themselves rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::Singularity(_)
                | Error::LinearAlgebra(_)
                | Error::InsufficientData(_)
                | Error::NonLinearFit(_)
                | Error::InvariantViolation(_)
                | Error::InvalidEstimate(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
