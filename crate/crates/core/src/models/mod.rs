//! Exact output distributions.
//!
//! Every table here is built by exhaustive enumeration of the output
//! configurations; there is no sampling inside this module. Input bosons
//! always enter ports `0..N`.

mod decomposed;
mod distinguishability;
mod factors;
mod probability;
mod table;

use thiserror::Error;

use crate::combinat::CombinatError;
use crate::linalg::LinalgError;

pub use self::decomposed::{
    classical_table, click_truncated_distribution, ideal_table, noisy_distribution,
    partial_dist_decomposed, truncated_distribution, truncated_noisy_distribution, Regime,
};
pub use self::distinguishability::{
    j_evaluate, probability_from_j, probability_from_j_table, DistinguishabilityFunction, JKind,
    J_IMAGINARY_TOL, J_PROBABILITY_MAX_N,
};
pub use self::probability::{
    classical_probability, ideal_probability, multiset_factorial, poisson_dark_pmf,
    truncated_quantum_probability, uniform_dark_pmf, IDEAL_MAX_N,
};
pub use self::table::{ModelTag, ProbabilityTable, TableMetadata};

pub(crate) use self::factors::{Factor, FactorCache};

/// Largest `N` for the noise-averaged tables.
pub const NOISY_MAX_N: usize = 8;
/// Largest `N` for tables that need per-subset classical factors.
pub const DECOMPOSED_MAX_N: usize = 6;

#[derive(Debug, Error)]
pub enum ModelsError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error("{operation} is limited to N <= {limit}, got N = {n}")]
    TooManyBosons {
        operation: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("network has {found} {what}, expected {expected}")]
    NetworkShape {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("dark count rate must be positive, got {0}")]
    InvalidRate(f64),
    #[error("{name} = {value} outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        range: String,
    },
    #[error("distinguishability function is not hermitian: imaginary part {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("tables have different supports: N = {n1}, M = {m1} versus N = {n2}, M = {m2}")]
    SupportMismatch {
        n1: usize,
        m1: usize,
        n2: usize,
        m2: usize,
    },
    #[error("distinguishability function acts on {found} bosons, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("overlap matrix must be hermitian with unit diagonal")]
    InvalidOverlap,
    #[error("table of {found} entries does not match {expected} configurations")]
    TableLength { expected: usize, found: usize },
    #[error("click cut-off R = {r} keeps no probability mass at this noise amplitude")]
    EmptyClickSupport { r: usize },
    #[error("table does not sum to one (total {0})")]
    NotNormalized(f64),
}

/// Checks that `u` has at least `n` rows and exactly `m` columns.
pub(crate) fn check_network(
    u: &crate::linalg::ComplexMatrix,
    n: usize,
    m: usize,
) -> Result<(), ModelsError> {
    if u.rows() < n {
        return Err(ModelsError::NetworkShape {
            what: "rows",
            expected: n,
            found: u.rows(),
        });
    }
    if u.cols() != m {
        return Err(ModelsError::NetworkShape {
            what: "columns",
            expected: m,
            found: u.cols(),
        });
    }
    Ok(())
}

pub(crate) fn guard_n(operation: &'static str, n: usize, limit: usize) -> Result<(), ModelsError> {
    if n > limit {
        return Err(ModelsError::TooManyBosons {
            operation,
            n,
            limit,
        });
    }
    Ok(())
}
