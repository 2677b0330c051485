use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed coding at step {index}: {reason}")]
    MalformedCoding { index: usize, reason: String },

    #[error("enumeration would exceed the cap of {cap} objects")]
    CapExceeded { cap: u64 },

    #[error("rejection budget of {attempts} attempts exhausted (acceptance rate {rate:.3e})")]
    RejectionBudget { attempts: u64, rate: f64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("covariance matrix not positive definite even after regularization")]
    NotPositiveDefinite,

    #[error("bad file format in {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
