use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The data cannot support the requested statistic (constant series, zero integral, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The operation is not defined for this input (e.g. the spectrum of an integrated model).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed external data. `row` is 1-based and counts data rows after the header.
    #[error("format error{}: {message}", row.map(|r| format!(" at row {r}")).unwrap_or_default())]
    Format { row: Option<usize>, message: String },

    /// A dissimilarity could not be computed for one pair of items.
    #[error("pair ({i}, {j}): {source}")]
    Pair {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::Degenerate(msg.into())
}

pub(crate) fn format_err(row: Option<usize>, msg: impl Into<String>) -> Error {
    Error::Format {
        row,
        message: msg.into(),
    }
}
