//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by signal construction, embedding, persistence, and the
/// scoring pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input field failed validation.
    #[error("invalid {field}: {reason}")]
    Validation {
        /// Name of the offending field or flag.
        field: &'static str,
        /// What was wrong with it.
        reason: String,
    },

    /// Input is structurally valid but not supported by this operation.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Evaluation requested outside a function's domain.
    #[error("argument {value} outside domain [{lo}, {hi}]")]
    OutOfDomain {
        /// Offending argument.
        value: f64,
        /// Domain lower end.
        lo: f64,
        /// Domain upper end.
        hi: f64,
    },

    /// The spectrum carries no usable peak (e.g. a constant signal).
    #[error("no dominant frequency in {0}")]
    NoDominantFrequency(String),

    /// A point-cloud entry is degenerate for the requested operation.
    #[error("degenerate point at index {index}: {reason}")]
    DegeneratePoint {
        /// Index of the offending point.
        index: usize,
        /// Why it is degenerate.
        reason: String,
    },

    /// The whole cloud is degenerate (e.g. zero total variance).
    #[error("degenerate cloud: {0}")]
    DegenerateCloud(String),

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch {
        /// Dimension of the first argument.
        left: usize,
        /// Dimension of the second argument.
        right: usize,
    },

    /// A caller broke an API contract (misuse, not bad data).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed CSV input.
    #[error("csv parse error at line {line}: {reason}")]
    CsvParse {
        /// 1-based line number.
        line: usize,
        /// What failed to parse.
        reason: String,
    },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether this error is a rejection of the inputs (as opposed to a
    /// failure arising during computation). The CLI maps validation errors
    /// to exit code 1 and computation errors to exit code 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. }
                | Error::Unsupported(_)
                | Error::DimensionMismatch { .. }
                | Error::CsvParse { .. }
                | Error::Io(_)
        )
    }

    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}
