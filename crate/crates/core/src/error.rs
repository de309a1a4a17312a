use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller supplied something outside an operation's domain: wrong qubit
    /// count, bad index set, mismatched dimensions, unnormalized input.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A matrix that should be a density matrix is not one (non-Hermitian,
    /// wrong trace, negative spectrum).
    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    /// Two independent evaluations of the same quantity disagree.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// The resource cannot run the requested protocol (its measurement basis
    /// or coded-state set is not orthonormal).
    #[error("protocol undefined for this resource: {0}")]
    ProtocolUndefined(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
