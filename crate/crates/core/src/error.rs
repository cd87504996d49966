use std::io;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("underdetermined least-squares problem: {rows} rows < {cols} columns")]
    Underdetermined { rows: usize, cols: usize },

    #[error("rank-deficient least-squares matrix: detected rank {rank} of {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("insufficient queries: row {row} has {row_nnz} pattern slots but m = {m}")]
    InsufficientQueries {
        row: usize,
        row_nnz: usize,
        m: usize,
    },

    #[error("singular matrix: zero pivot at column {column}")]
    Singular { column: usize },

    #[error("inverse residual {residual:e} exceeds tolerance")]
    InaccurateInverse { residual: f64 },

    #[error("estimate undefined at index {index}: zero denominator")]
    EstimateUndefined { index: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("config error: {0}")]
    Config(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for failures of the numerics (as opposed to bad input or I/O).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::Singular { .. }
                | Error::InaccurateInverse { .. }
                | Error::EstimateUndefined { .. }
        )
    }

    /// Short machine-readable tag, used in CSV status columns.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Underdetermined { .. } => "underdetermined",
            Error::RankDeficient { .. } => "rank-deficient",
            Error::InsufficientQueries { .. } => "insufficient-queries",
            Error::Singular { .. } => "singular",
            Error::InaccurateInverse { .. } => "inaccurate-inverse",
            Error::EstimateUndefined { .. } => "estimate-undefined",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Config(_) => "config",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
