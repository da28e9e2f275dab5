use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator in rational function")]
    ZeroDenominator,

    #[error("division by a zero element")]
    DivisionByZero,

    #[error("parameter constraint violated: {0}")]
    Domain(String),

    #[error("unsupported parameter branch: {0}")]
    UnsupportedBranch(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("coefficient form unavailable ({0}); direct application only")]
    CoefficientFormUnavailable(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("precision failure: {0}")]
    Precision(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O failure at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failure: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("CSV failure: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
