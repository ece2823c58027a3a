use thiserror::Error;

/// Errors raised by the clustering pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Inconsistent run configuration (missing or forbidden options).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A fuzzy cluster received zero total membership weight.
    #[error("degenerate cluster {cluster}: all memberships are zero")]
    DegenerateCluster { cluster: usize },

    #[error(
        "k = {k} exceeds the number of granular-balls ({balls}); lower k or raise --min-split-size / --radius-factor to generate more balls"
    )]
    KExceedsBalls { k: usize, balls: usize },

    /// Malformed input data. `row` and `column` are 1-based positions in the source file.
    #[error("data error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
