use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A special function or kernel was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Shapes or lengths of the arguments do not line up.
    #[error("argument error: {0}")]
    Argument(String),

    /// Problem data violates an invariant (order, grid, coefficients, config).
    #[error("validation error: {0}")]
    Validation(String),

    /// The Jacobi iteration ran out of sweeps.
    #[error("jacobi did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e}, target {target:e})")]
    Convergence {
        sweeps: usize,
        off_norm: f64,
        target: f64,
    },

    /// Malformed or schema-violating configuration text.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
