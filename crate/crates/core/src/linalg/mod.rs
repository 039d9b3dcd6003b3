//! Complex dense matrices, permanents and random-matrix ensembles.

mod csv;
mod matrix;
mod permanent;
mod random;

use thiserror::Error;

pub use self::csv::{matrix_from_csv, matrix_to_csv};
pub use self::matrix::ComplexMatrix;
pub use self::permanent::{
    permanent, permanent_naive, permanent_of, permanent_ryser, PermScalar, PermanentMethod,
    NAIVE_MAX_ORDER, RYSER_MAX_ORDER,
};
pub use self::random::{
    gaussian_matrix, haar_isometry, haar_unitary, noisy_mixture, noisy_submatrix, NoiseParams,
};

/// Tolerance used when a matrix is required to be unitary.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("permanent of order {order} exceeds the {method:?} limit of {limit}")]
    OrderTooLarge {
        order: usize,
        limit: usize,
        method: PermanentMethod,
    },
    #[error("{axis} index {index} out of range (< {bound})")]
    IndexOutOfRange {
        index: usize,
        bound: usize,
        axis: &'static str,
    },
    #[error("{0} must be at least 1")]
    EmptyDimension(&'static str),
    #[error("noise amplitude {0} outside [0, 1]")]
    InvalidNoise(f64),
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix file, line {line}: {message}")]
    Parse { line: usize, message: String },
}
