use std::path::PathBuf;

/// Errors raised by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid user-supplied configuration (dimensions, parameters, tables).
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed benchmark data file.
    #[error("{path}:{line}: {message}")]
    Load {
        path: PathBuf,
        line: usize,
        message: String,
    },
    /// Loaded data violates a structural requirement (e.g. non-orthogonal rotation).
    #[error("validation error: {0}")]
    Validation(String),
    /// Broken internal precondition, e.g. sorting a population with unevaluated members.
    #[error("internal error: {0}")]
    Internal(String),
    /// A report could not be produced from the available data.
    #[error("report error: {0}")]
    Report(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
