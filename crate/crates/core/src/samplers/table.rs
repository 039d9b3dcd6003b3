use rand::Rng;

use super::{run_jobs, EmpiricalDistribution, SamplersError, NORMALIZATION_TOL};
use crate::models::ProbabilityTable;
use crate::rng::stream;

/// Draws per stream.
pub(crate) const STREAM_DRAWS: u64 = 1 << 14;

/// Splits `draws` into `(stream index, draws in stream)` pairs.
pub(crate) fn stream_sizes(draws: u64) -> Vec<u64> {
    let full = draws / STREAM_DRAWS;
    let rest = draws % STREAM_DRAWS;
    let mut sizes = vec![STREAM_DRAWS; full as usize];
    if rest > 0 {
        sizes.push(rest);
    }
    sizes
}

/// Index `i` with `cdf[i-1] <= x < cdf[i]`.
#[inline]
pub(crate) fn invert_cdf(cdf: &[f64], x: f64) -> usize {
    cdf.partition_point(|&c| c <= x).min(cdf.len() - 1)
}

/// I.i.d. draws from `p` by inverting its cumulative distribution.
///
/// The table must be a probability distribution; pass
/// [`ProbabilityTable::clamped_renormalized`] for models with negative
/// entries.
pub fn sample_table(
    p: &ProbabilityTable,
    draws: u64,
    seed: u64,
) -> Result<EmpiricalDistribution, SamplersError> {
    if let Some(&neg) = p.entries().iter().find(|&&v| v < 0.0 || !v.is_finite()) {
        return Err(SamplersError::NotNormalized(format!("entry {neg}")));
    }
    let total = p.total();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(SamplersError::NotNormalized(format!("total {total}")));
    }
    let cdf: Vec<f64> = p
        .entries()
        .iter()
        .scan(0.0, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let top = *cdf.last().expect("tables are never empty");
    let sizes = stream_sizes(draws);
    let parts = run_jobs(sizes.len(), |i| {
        let mut rng = stream(seed, "sample_table", i as u64);
        let mut counts = vec![0u64; cdf.len()];
        for _ in 0..sizes[i] {
            let x = rng.random::<f64>() * top;
            counts[invert_cdf(&cdf, x)] += 1;
        }
        Ok::<_, SamplersError>(counts)
    })?;
    let mut emp = EmpiricalDistribution::from_indexer(p.indexer().clone());
    emp.add_counts(parts.iter())?;
    Ok(emp)
}
