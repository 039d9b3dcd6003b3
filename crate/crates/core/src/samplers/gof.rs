use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{EmpiricalDistribution, SamplersError, NORMALIZATION_TOL};
use crate::models::ProbabilityTable;

/// Significance level below which a goodness-of-fit test fails.
pub const GOF_LEVEL: f64 = 0.001;
/// Cells with a smaller expected count are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

/// Pearson chi-square test result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Cells kept after pooling, including the pooled cell.
    pub cells: usize,
    pub pass: bool,
}

/// Pearson test of observed tallies against cell probabilities.
///
/// Cells expected to hold fewer than [`MIN_EXPECTED`] draws are pooled into
/// one cell; if that pool is itself too small it is folded into the smallest
/// retained cell. Draws in a cell of probability zero fail the test outright.
pub fn chi_square_counts(observed: &[u64], probs: &[f64]) -> Result<GofResult, SamplersError> {
    if observed.len() != probs.len() {
        return Err(SamplersError::SupportMismatch);
    }
    if let Some(&bad) = probs.iter().find(|&&q| q < 0.0 || !q.is_finite()) {
        return Err(SamplersError::NotNormalized(format!("entry {bad}")));
    }
    let total_p: f64 = probs.iter().sum();
    if (total_p - 1.0).abs() > NORMALIZATION_TOL {
        return Err(SamplersError::NotNormalized(format!("total {total_p}")));
    }
    let draws: u64 = observed.iter().sum();
    if draws == 0 {
        return Err(SamplersError::NoDraws);
    }
    let t = draws as f64;
    let mut impossible = 0u64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut pool_e, mut pool_o) = (0.0, 0.0);
    for (&o, &q) in observed.iter().zip(probs) {
        let e = q * t;
        if q == 0.0 {
            impossible += o;
        } else if e < MIN_EXPECTED {
            pool_e += e;
            pool_o += o as f64;
        } else {
            cells.push((e, o as f64));
        }
    }
    if pool_e >= MIN_EXPECTED {
        cells.push((pool_e, pool_o));
    } else if pool_e > 0.0 {
        match cells.iter_mut().min_by(|a, b| a.0.total_cmp(&b.0)) {
            Some(cell) => {
                cell.0 += pool_e;
                cell.1 += pool_o;
            }
            None => cells.push((pool_e, pool_o)),
        }
    }
    if cells.len() < 2 {
        return Err(SamplersError::InsufficientDraws { cells: cells.len() });
    }
    let dof = cells.len() - 1;
    if impossible > 0 {
        return Ok(GofResult {
            statistic: f64::INFINITY,
            dof,
            p_value: 0.0,
            cells: cells.len(),
            pass: false,
        });
    }
    let statistic: f64 = cells.iter().map(|(e, o)| (o - e) * (o - e) / e).sum();
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let p_value = dist.sf(statistic);
    Ok(GofResult {
        statistic,
        dof,
        p_value,
        cells: cells.len(),
        pass: p_value >= GOF_LEVEL,
    })
}

/// Pearson test of an empirical distribution against a table on the same
/// support.
pub fn chi_square_gof(
    emp: &EmpiricalDistribution,
    p: &ProbabilityTable,
) -> Result<GofResult, SamplersError> {
    if emp.bosons() != p.bosons() || emp.modes() != p.modes() {
        return Err(SamplersError::SupportMismatch);
    }
    chi_square_counts(emp.counts(), p.entries())
}
