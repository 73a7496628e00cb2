use alloc::string::String;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operands disagree on the underlying dimension d.
    DimensionMismatch { expected: usize, got: usize },
    /// A precondition on the inputs is violated.
    InvalidInput(String),
    /// The requested configuration is not supported (e.g. CC norm for d != 2).
    Unsupported(String),
    /// An iterative solve failed to converge; carries the final residual.
    NonConvergence { residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported configuration: {msg}"),
            Error::NonConvergence { residual } => {
                write!(f, "solver failed to converge, residual {residual:e}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
