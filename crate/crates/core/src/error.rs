use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("invalid spectrum interval: ell={ell}, L={big_l}")]
    InvalidSpectrum { ell: f64, big_l: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("recurrence denominator vanished at t={t}")]
    DegenerateRecurrence { t: usize },
    #[error("step {t} is beyond the tabulated horizon {horizon}")]
    HorizonExceeded { t: usize, horizon: usize },
    #[error("operands use different variable maps")]
    MapMismatch,
    #[error("dimension {0} exceeds the dense eigensolver limit")]
    TooLarge(usize),
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("family does not commute with its parameter derivative (defect {0:.3e})")]
    NonCommuting(f64),
    #[error("invalid config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

