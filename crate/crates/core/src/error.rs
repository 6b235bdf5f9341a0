use thiserror::Error;

/// Errors raised by the envelope computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    /// An enumeration bound was hit. `key` names the configuration entry
    /// that lifts it and `required` is the smallest value that would pass.
    #[error("resource bound exceeded: {what} needs {key} >= {required} (current {limit})")]
    ResourceBound {
        what: String,
        key: &'static str,
        limit: u64,
        required: u64,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("polynomial is identically zero")]
    IdenticallyZero,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
