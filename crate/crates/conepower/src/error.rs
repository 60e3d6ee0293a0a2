use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty data: {0}")]
    EmptyData(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector is not unit norm (|‖v‖ − 1| = {deviation:.3e})")]
    NonUnitVector { deviation: f64 },

    #[error("invalid start vector: {0}")]
    InvalidStart(String),

    #[error("projection collapsed to zero; cannot normalize")]
    DegenerateProjection,

    #[error("input matrix failed the positive semidefinite probe (wᵀAw = {witness:.3e})")]
    NotPositiveSemidefinite { witness: f64 },

    #[error("no grid point of the sphere lies in the cone; refine the grid step")]
    EmptyGrid,

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
