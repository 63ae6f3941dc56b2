use std::path::PathBuf;

/// Errors raised by the simulator library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller broke an operation's precondition (length mismatch, parameter
    /// out of range, negative input where non-negative is required).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The exact solver refuses instances above its size limit.
    #[error("instance of {size} items exceeds the exact solver limit of {limit}")]
    Capacity { size: usize, limit: usize },

    /// Malformed or inconsistent input data. `line` is 1-based and counts the header.
    #[error("data error at line {line}: {message}")]
    Data { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Confidence intervals need at least two repetitions.
    #[error("confidence interval undefined for {0} repetition(s); at least 2 are required")]
    CiUndefined(usize),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(message: impl Into<String>) -> Error {
    Error::Contract(message.into())
}

pub(crate) fn data(line: usize, message: impl Into<String>) -> Error {
    Error::Data {
        line,
        message: message.into(),
    }
}
