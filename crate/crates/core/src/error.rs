use thiserror::Error;

/// Errors produced by projection, iteration and estimation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("power iteration did not converge after {iterations} iterations (estimate {estimate}, relative change {residual})")]
    PowerIterationDiverged {
        estimate: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("symmetric eigensolver did not converge")]
    EigenNonConvergence,

    #[error("spanning set collapsed to rank {achieved}, requested {requested}")]
    RankCollapse { requested: usize, achieved: usize },

    #[error("non-finite iterate at k = {k}")]
    NonFiniteIterate { k: usize },

    #[error("invalid permutation of {m} sets")]
    InvalidPermutation { m: usize },

    #[error("need at least {needed} positive points in the fit window, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
