use thiserror::Error;

/// Errors raised by the numerical laboratory.
///
/// The variants are grouped by how a caller should react: bad input
/// (`InvalidParameter`, `Precondition`, `Unsupported`), numerical trouble
/// that invalidates a measurement (`TailCheck`, `Aliasing`, `NonFinite`),
/// and internal consistency failures (`Inconsistent`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("tail check failed: {0}")]
    TailCheck(String),

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("non-finite value at {point:?}: {detail}")]
    NonFinite { point: Vec<f64>, detail: String },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that mark a numerical measurement as unusable
    /// (as opposed to a caller mistake).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TailCheck(_)
                | Error::Aliasing(_)
                | Error::NonFinite { .. }
                | Error::DegenerateFit(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
