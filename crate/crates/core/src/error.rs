use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (unknown elements, violated hypotheses).
    #[error("input error: {0}")]
    Input(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An invariant the algorithms rely on failed. Indicates a bug or a
    /// non-matroid oracle; never expected on valid input.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Exhaustive checks refuse instances above a hard size ceiling.
    #[error("instance too large: {size} elements, limit is {limit}")]
    TooLarge { size: usize, limit: usize },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
