use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("accuracy loss: {0}")]
    Accuracy(String),
    #[error("singular determinant: {0}")]
    Singularity(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("i/o: {0}")]
    Io(String),
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
