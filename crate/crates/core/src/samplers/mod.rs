//! Stochastic realizations of the models and Monte Carlo checks of the noise
//! average.
//!
//! Work is split into fixed streams; stream `i` draws from
//! [`crate::rng::stream`]`(seed, component, i)`, so results do not depend on
//! how many threads happen to run them.

mod compositional;
mod empirical;
mod gof;
mod realizations;
mod table;

use thiserror::Error;

use crate::combinat::CombinatError;
use crate::linalg::LinalgError;
use crate::models::ModelsError;

pub use self::compositional::{
    sample_noisy_compositional, CompositionalSample, COMPOSITIONAL_MAX_N,
};
pub use self::empirical::{EmpiricalDistribution, SampleRecord};
pub use self::gof::{chi_square_counts, chi_square_gof, GofResult, GOF_LEVEL, MIN_EXPECTED};
pub use self::realizations::{sample_noise_realizations, NoiseAverage, REALIZATION_MAX_N};
pub use self::table::sample_table;

/// Tolerance on the total of a table handed to a sampler.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SamplersError {
    #[error(transparent)]
    Models(#[from] ModelsError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("table is not a probability distribution: {0}")]
    NotNormalized(String),
    #[error("empirical distribution has no draws")]
    NoDraws,
    #[error("only {cells} cell(s) left after pooling; need more draws")]
    InsufficientDraws { cells: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("empirical distribution and table have different supports")]
    SupportMismatch,
}

/// Runs `jobs` independent jobs on the available cores and returns their
/// results in job order.
pub(crate) fn run_jobs<T, E>(
    jobs: usize,
    f: impl Fn(usize) -> Result<T, E> + Sync,
) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
{
    use std::sync::atomic::{AtomicUsize, Ordering};

    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs)
        .max(1);
    let next = AtomicUsize::new(0);
    let mut done: Vec<(usize, Result<T, E>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= jobs {
                            break out;
                        }
                        out.push((i, f(i)));
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sampler worker panicked"))
            .collect()
    });
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, r)| r).collect()
}
