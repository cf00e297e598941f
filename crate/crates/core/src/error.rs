use thiserror::Error;

/// Errors raised by the kernels, pursuits and experiment driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("index {index} out of bounds for ambient dimension {dim}")]
    IndexOutOfBounds { index: usize, dim: usize },

    #[error("column submatrix of {size} atoms has numerical rank {rank}")]
    RankDeficient { rank: usize, size: usize },

    #[error("cannot select {requested} entries: only {available} eligible")]
    InsufficientCandidates { requested: usize, available: usize },

    #[error("initial support has {given} atoms, at most {max} allowed for sparsity {sparsity}", max = .sparsity - 1)]
    InvalidInitialSupport { given: usize, sparsity: usize },

    #[error("invalid sparsity {sparsity} for {rows}x{cols} problem")]
    InvalidSparsity {
        sparsity: usize,
        rows: usize,
        cols: usize,
    },

    #[error("fusion needs at least 2K = {needed} measurements, got {rows}")]
    InsufficientMeasurements { needed: usize, rows: usize },

    #[error("aggregate holds no completed trials")]
    EmptyAggregate,

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
