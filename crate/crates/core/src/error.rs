//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// `e_k(S)` with `k > |S|`. Mathematically the value is zero, but the
    /// construction never needs that case, so we treat it as a caller bug.
    #[error("degree exceeds set size: e_{k} over a set of {size} variables")]
    DegreeExceedsSetSize { k: usize, size: usize },

    #[error("k={k} out of range for n={n} (need {min} <= k <= {max})")]
    KOutOfRange {
        n: usize,
        k: usize,
        min: usize,
        max: usize,
    },

    #[error("weight parameter r={r} must be at least k={k}")]
    WeightParamTooSmall { r: usize, k: usize },

    #[error("pole: a denominator vanishes at the evaluation point")]
    Pole,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("edge budget exceeded: {edges} edges (enumeration limit {limit})")]
    EdgeBudgetExceeded { edges: usize, limit: usize },

    #[error("unknown vertex: {0}")]
    UnknownVertex(String),

    #[error("inadmissible base point: form {index} vanishes at e")]
    InadmissibleBasePoint { index: usize },

    #[error("restriction is not real-rooted; the polynomial is not hyperbolic along this line")]
    NotHyperbolic,

    #[error("invalid trial config: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("all sampled points hit poles; verification inconclusive")]
    AllSamplesPoles,

    #[error("integer overflow while {0}")]
    IntOverflow(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
