use std::io;

use thiserror::Error;

use crate::signal::SignalError;

/// Errors from the transform engine and map I/O.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{0}")]
    Domain(String),
    #[error("admissibility integral did not converge: {0}")]
    Convergence(String),
    #[error("output grid [{t0}, {t1}] lies outside the shift extent [{lo}, {hi}]")]
    Extent { t0: f64, t1: f64, lo: f64, hi: f64 },
    #[error("reconstruction error undefined: reference signal is all zero")]
    UndefinedMetric,
    #[error("signals differ in grid: {0}")]
    Grid(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Signal(#[from] SignalError),
}

pub type EngineResult<T> = Result<T, EngineError>;
