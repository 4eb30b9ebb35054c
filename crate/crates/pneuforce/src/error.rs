//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter violated its domain (non-positive dimension, etc.).
    #[error("domain error: {field} must be {requirement}, got {value}")]
    Domain {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// A value fell outside an allowed interval.
    #[error("range error: {field} = {value} outside [{min}, {max}]")]
    OutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A relative quantity could not be formed because its normalizer is zero.
    #[error("degenerate scale: {0} is zero")]
    DegenerateScale(&'static str),

    /// Dataset text did not conform to the CSV schema.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Load schedule construction failed.
    #[error("schedule error: {0}")]
    Schedule(String),

    /// Least-squares fit could not be performed.
    #[error("fit error: {0}")]
    Fit(String),

    /// Uncertainty budget inputs were missing or unusable.
    #[error("budget error: {0}")]
    Budget(String),

    /// Classification could not be carried out.
    #[error("classification error: {0}")]
    Classification(String),

    /// An integration step produced a non-finite state component or failed
    /// to settle.
    #[error("numeric instability at t = {t} s{context}")]
    NumericInstability { t: f64, context: String },

    /// Configuration file or flag rejected.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code contract: 0 success, 1 config/parse, 2 numeric,
    /// 3 incomplete analysis.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericInstability { .. } => 2,
            Error::Budget(_) | Error::Classification(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn with_context(self, extra: &str) -> Error {
        match self {
            Error::NumericInstability { t, context } => Error::NumericInstability {
                t,
                context: format!("{context} ({extra})"),
            },
            other => other,
        }
    }
}
