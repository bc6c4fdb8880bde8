use thiserror::Error;

/// Errors produced by the reduced basis toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RbError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative solve hit its iteration cap before reaching the requested tolerance.
    #[error("solver failed to converge after {iterations} iterations (relative residual {residual:e})")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
}

pub type Result<T> = std::result::Result<T, RbError>;

pub(crate) fn invalid(msg: impl Into<String>) -> RbError {
    RbError::InvalidArgument(msg.into())
}
