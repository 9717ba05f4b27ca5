use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the solver library and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the valid range {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    CgNotConverged { iterations: usize, residual: f64 },

    #[error("{dim}x{dim} matrix is not positive definite")]
    NotPositiveDefinite { dim: usize },

    #[error("non-finite value in solution at time step {step}")]
    NonFinite { step: usize },

    #[error("problem error: {0}")]
    Problem(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("time {requested} is not on the time grid (nearest grid times: {below}, {above})")]
    OffGridTime {
        requested: f64,
        below: f64,
        above: f64,
    },

    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
