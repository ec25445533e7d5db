use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two registers being combined share a subsystem label.
    #[error("label collision: `{0}` appears in more than one register")]
    LabelCollision(String),

    /// An argument lies outside the domain of the operation (unknown labels,
    /// mismatched registers, out-of-range indices).
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructed value violates one of its invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// The caller broke an operation contract, e.g. decoding an outcome read
    /// in the wrong basis.
    #[error("contract error: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
