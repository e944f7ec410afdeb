use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on an input value was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative method ran out of iterations or step-size headroom.
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    /// A least-squares fit has no unique solution for the given samples.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

/// Reject non-finite values with a message naming the parameter.
pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {value}")))
    }
}
