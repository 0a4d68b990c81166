use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A size guard was exceeded.
    #[error("size guard exceeded: {what} = {value} (limit {limit})")]
    Size {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("series did not converge within {max_terms} terms (last term {last_term:e}, partial sum {partial_sum:e})")]
    NonConvergence {
        max_terms: usize,
        last_term: f64,
        partial_sum: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("charge sector Q = {q} is empty")]
    EmptySector { q: i64 },

    #[error("no eigenvalues in window [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("operator does not commute with fermion parity (commutator norm {0:e})")]
    ParityViolation(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Invalid experiment configuration; `field` names the offending entry.
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by invalid user input rather than a runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Config { .. } | Error::Json(_) | Error::Domain(_) | Error::Size { .. }
        )
    }
}
