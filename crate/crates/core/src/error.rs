use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A 1-based coordinate outside `[1, n]`.
    #[error("index {index} out of range for ground set [1, {n}]")]
    OutOfRange { index: usize, n: usize },

    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(String),

    /// A search produced a family that fails its own predicate.
    #[error("witness failed re-validation: {0}")]
    WitnessRejected(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
