//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by grid construction, field operations, the solver and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("block index {j} out of range [{lo}, {hi}]")]
    BlockIndexOutOfRange { j: i32, lo: i32, hi: i32 },

    #[error("time {t} is not a node of the time grid")]
    NotATimeNode { t: f64 },

    #[error(
        "fixed-point iteration is not contracting (increment grew for {consecutive_growth} \
         consecutive iterations, last increment {last_increment:.3e}); \
         the data is too large for this horizon, retry with a smaller T"
    )]
    NonContraction {
        iterations: usize,
        consecutive_growth: usize,
        last_increment: f64,
    },

    #[error("time step rejected at t={t}: per-step correction failed to contract")]
    StepRejected { t: f64 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
