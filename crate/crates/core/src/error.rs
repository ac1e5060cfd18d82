use thiserror::Error;

/// Errors surfaced by the library.
///
/// `exit_code` mirrors the CLI contract: 2 for malformed input, 3 for
/// numerical non-convergence, 4 for violated preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a real-valued polynomial")]
    NotRealValued,

    #[error("affine map has (numerically) singular linear part")]
    SingularMap,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("point outside domain of definition: {0}")]
    OutOfDomain(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn non_convergence(msg: impl Into<String>) -> Self {
        Error::NonConvergence(msg.into())
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::DimensionMismatch { .. } => 2,
            Error::NonConvergence(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
