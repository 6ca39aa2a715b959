use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("transformed potential is not finite at node k = {node} (t = {t})")]
    Assembly { node: i64, t: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("D[{index}] = {value:e} underflows: the map overflows at the extreme nodes")]
    Underflow { index: usize, value: f64 },

    #[error("condition number {condition:e} exceeds the limit {limit:e}")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("symmetric eigensolver did not converge")]
    NoConvergence,

    #[error("relative error is undefined for a zero reference value")]
    UndefinedMetric,

    #[error("at least 2 records are required, got {0}")]
    InsufficientData(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
