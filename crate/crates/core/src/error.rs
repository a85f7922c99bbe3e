use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Not enough sequence terms to perform the requested computation.
    #[error("coverage error: {0}")]
    Coverage(String),

    /// The leading coefficient of a recurrence vanishes at an index that is needed.
    #[error("recurrence is singular at n = {index}: leading coefficient vanishes")]
    Singular { index: i64 },

    #[error("division by zero term at index {index}")]
    ZeroTerm { index: i64 },

    /// A stated precondition on the input does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("ambiguous dominant root: {0}")]
    Ambiguous(String),

    /// The requested case lies outside what the r-order criterion covers.
    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
