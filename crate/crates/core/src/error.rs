//! Error type shared by every module, with a stable mapping to process exit
//! codes for the CLI (0 success, 1 validation, 2 data, 3 numeric).

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or configuration detected before any work starts.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A data file is malformed, truncated, or carries invalid content.
    #[error("data error: {0}")]
    Data(String),

    /// Underlying I/O failure while reading or writing files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A linear system has no usable pivot (matrix singular to working
    /// precision).
    #[error("singular matrix: {0}")]
    Singular(String),

    /// A numeric computation left the trusted range (overflow, divergence,
    /// or non-finite values).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Process exit code the CLI reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Dimension(_) => 1,
            Error::Data(_) | Error::Io(_) => 2,
            Error::Singular(_) | Error::Numeric(_) => 3,
        }
    }
}
