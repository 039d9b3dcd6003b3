//! Closed-form statistics and bounds: the binomial click law, total
//! variation distance, the symmetric-projection weight `d_J`, and the
//! truncation and tail bounds with their cut-off calculators.

mod bounds;
mod stats;

use thiserror::Error;

use crate::models::ModelsError;

pub use self::bounds::{
    average_tvd_bound, average_tvd_bound_report, click_tail, click_tail_report, cutoff_r,
    cutoff_r_formula, cutoff_r_report, hoeffding_report, hoeffding_tail_bound, noise_click_ratio,
    noise_click_ratio_report, sufficient_r, sufficient_r_report, tvd_bound_distinguishability,
    BoundInputs, BoundReport, BoundStatus, SufficientR, BOUND_SLACK,
};
pub use self::stats::{binomial_pmf, d_j, tvd, DjForm, DJ_BRUTE_MAX_N};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{name} = {value} is outside {allowed}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },
    #[error("brute-force d_J is limited to N <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Models(#[from] ModelsError),
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    allowed: &'static str,
) -> Result<(), AnalysisError> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(AnalysisError::OutOfRange {
            name,
            value,
            allowed,
        })
    }
}
