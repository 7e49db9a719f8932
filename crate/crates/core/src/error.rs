use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument is out of range or inconsistent.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A precondition on the input object does not hold (missing embedding,
    /// truncated graph without a boundary policy, isolated vertex, ...).
    #[error("contract violated: {0}")]
    Contract(String),
    /// An iterative numeric method failed to converge.
    #[error("numeric failure: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },
    /// A size limit was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed graph or point-set file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
