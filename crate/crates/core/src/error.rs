use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// The variants map onto the CLI exit codes: [`Error::Domain`] and
/// [`Error::Precision`] exit with 1, [`Error::Integrity`] with 3, and
/// [`Error::Usage`] and [`Error::Io`] with 1 (argument parsing errors are handled by clap, which
/// exits with 2).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Operands or parameters are inconsistent with each other.
    #[error("usage error: {0}")]
    Usage(String),
    /// An internal consistency check failed (surviving log terms, oracle
    /// disagreement).
    #[error("integrity error: {0}")]
    Integrity(String),
    /// A numerical method did not reach its requested accuracy.
    #[error("precision error: {0}")]
    Precision(String),
    /// A spectral representation is under-resolved.
    #[error("resolution error: {0}")]
    Resolution(String),
    /// Writing output failed.
    #[error("i/o error: {1}")]
    Io(std::io::ErrorKind, String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Integrity(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
