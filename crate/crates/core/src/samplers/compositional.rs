use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::table::{invert_cdf, stream_sizes};
use super::{run_jobs, EmpiricalDistribution, SampleRecord, SamplersError};
use crate::combinat::{binomial_f64, subsets_of_size, ConfigurationIndexer, OutputConfiguration};
use crate::linalg::{ComplexMatrix, NoiseParams};
use crate::models::{Factor, FactorCache};
use crate::rng::stream;

/// Largest `N` for the compositional sampler.
pub const COMPOSITIONAL_MAX_N: usize = 6;

/// Output of [`sample_noisy_compositional`].
#[derive(Debug, Clone)]
pub struct CompositionalSample {
    pub distribution: EmpiricalDistribution,
    /// One record per draw, in stream order.
    pub records: Vec<SampleRecord>,
}

/// Conditional quantum output tables for every input subset of one size.
struct SubsetTables {
    k: usize,
    /// Sorted port lists of `k` bosons, flattened.
    ports: Vec<usize>,
    /// Cumulative factor per input subset mask.
    cdfs: Vec<(u64, Vec<f64>)>,
}

impl SubsetTables {
    fn cdf(&self, mask: u64) -> &[f64] {
        let i = self
            .cdfs
            .binary_search_by_key(&mask, |(m, _)| *m)
            .expect("every subset of this size is tabulated");
        &self.cdfs[i].1
    }
}

/// Samples the noise-averaged model as a generative process: `n ~ B(N, 1-eps)`
/// bosons from a uniform input subset interfere through `U`, and the other
/// `N - n` clicks land independently and uniformly on the `M` outputs.
pub fn sample_noisy_compositional(
    u: &ComplexMatrix,
    eps: NoiseParams,
    n: usize,
    m: usize,
    draws: u64,
    seed: u64,
) -> Result<CompositionalSample, SamplersError> {
    if n > COMPOSITIONAL_MAX_N {
        return Err(SamplersError::Precondition(format!(
            "compositional sampler: N = {n} exceeds the limit {COMPOSITIONAL_MAX_N}"
        )));
    }
    if u.rows() < n || u.cols() != m {
        return Err(SamplersError::Precondition(format!(
            "network is {}x{}, need at least {n} rows and {m} columns",
            u.rows(),
            u.cols()
        )));
    }
    let indexer = ConfigurationIndexer::new(n, m)?;
    let sizes: Vec<usize> = (0..=n)
        .filter(|&k| {
            binomial_f64(n, k)
                * eps.transmission().powi(k as i32)
                * eps.epsilon().powi((n - k) as i32)
                > 0.0
        })
        .collect();
    let cache = FactorCache::build(u, n, sizes.iter().copied(), Factor::Quantum)?;
    let mut tables: Vec<Option<SubsetTables>> = (0..=n).map(|_| None).collect();
    for &k in &sizes {
        let ports = cache.indexer(k).port_lists().flatten().collect();
        let mut cdfs: Vec<_> = subsets_of_size(n, k)
            .map(|mask| {
                let cdf = cache
                    .values(mask)
                    .iter()
                    .scan(0.0, |acc, &v| {
                        *acc += v.max(0.0);
                        Some(*acc)
                    })
                    .collect();
                (mask, cdf)
            })
            .collect();
        cdfs.sort_by_key(|(mask, _)| *mask);
        tables[k] = Some(SubsetTables { k, ports, cdfs });
    }
    let binomial = Binomial::new(n as u64, eps.transmission())
        .map_err(|e| SamplersError::Precondition(e.to_string()))?;

    let streams = stream_sizes(draws);
    let parts = run_jobs(streams.len(), |i| {
        let mut rng = stream(seed, "sample_noisy_compositional", i as u64);
        let mut emp = EmpiricalDistribution::from_indexer(indexer.clone());
        let mut records = Vec::with_capacity(streams[i] as usize);
        let mut ports = Vec::with_capacity(n);
        for _ in 0..streams[i] {
            let k = binomial.sample(&mut rng) as usize;
            let table = tables[k].as_ref().expect("size has positive weight");
            let mask = rand::seq::index::sample(&mut rng, n, k)
                .iter()
                .fold(0u64, |acc, j| acc | (1 << j));
            let cdf = table.cdf(mask);
            let x = rng.random::<f64>() * cdf[cdf.len() - 1];
            let j = invert_cdf(cdf, x);
            ports.clear();
            ports.extend_from_slice(&table.ports[j * table.k..(j + 1) * table.k]);
            for _ in k..n {
                ports.push(rng.random_range(0..m));
            }
            ports.sort_unstable();
            emp.record_ports(&ports);
            records.push(SampleRecord {
                configuration: OutputConfiguration::from_ports(&ports, m)?,
                n_quantum: k,
                n_noise_clicks: n - k,
                seed_tag: i as u64,
            });
        }
        Ok::<_, SamplersError>((emp, records))
    })?;

    let mut distribution = EmpiricalDistribution::from_indexer(indexer);
    let mut records = Vec::with_capacity(draws as usize);
    for (emp, recs) in parts {
        distribution.merge(&emp)?;
        records.extend(recs);
    }
    Ok(CompositionalSample {
        distribution,
        records,
    })
}
