use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FqmError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("expected {expected} representation, got {found}")]
    Representation { expected: &'static str, found: &'static str },

    #[error("potential not admissible here: {0}")]
    Potential(String),

    #[error("{what} did not converge (estimate {estimate:e}, error {error:e})")]
    NonConvergence { what: &'static str, estimate: f64, error: f64 },

    #[error("root bracketing failed on [{lo}, {hi}] after {found} roots")]
    Bracketing { lo: f64, hi: f64, found: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("numerical overflow: {0}")]
    Overflow(String),
}

impl FqmError {
    /// Offending parameter name, when there is one.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            FqmError::InvalidParameter { name, .. } => Some(name),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, FqmError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> FqmError {
    FqmError::InvalidParameter { name, reason: reason.into() }
}
