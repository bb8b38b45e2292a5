use std::path::PathBuf;

use thiserror::Error;

use crate::hypergraph::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The explicit backend would have to store too many edges.
    #[error(
        "expected edge count {expected:.3e} exceeds the explicit-sampling budget {budget:.3e}; \
         use the lazy backend"
    )]
    BudgetExceeded { expected: f64, budget: f64 },

    #[error("instance too large for brute force: {size} exceeds the limit {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("path count overflowed 128 bits at length {ell}")]
    CountOverflow { ell: usize },

    #[error("f(x) = 1 has no bracket on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("invalid hypergraph: {0}")]
    Invalid(#[from] Violation),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("bad probability expression {expr:?}: {message}")]
    Expr { expr: String, message: String },

    #[error("need at least {needed} trials, got {got}")]
    InsufficientTrials { needed: usize, got: usize },

    #[error("all {0} trials failed")]
    AllTrialsFailed(usize),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag, used in CSV `error` cells.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::SizeLimit { .. } => "size-limit",
            Error::CountOverflow { .. } => "count-overflow",
            Error::NoBracket { .. } => "no-bracket",
            Error::Invalid(_) => "invalid-hypergraph",
            Error::Parse { .. } => "parse",
            Error::Expr { .. } => "expression",
            Error::InsufficientTrials { .. } => "insufficient-trials",
            Error::AllTrialsFailed(_) => "all-trials-failed",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
