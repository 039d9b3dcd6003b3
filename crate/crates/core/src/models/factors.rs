//! Cached quantum and classical probability factors for every subset of the
//! input ports and every sub-configuration of the outputs.

use num_complex::Complex64;

use super::probability::{multiset_factorial, truncated_quantum_probability};
use super::ModelsError;
use crate::combinat::{subsets_of_size, ConfigurationIndexer};
use crate::linalg::{permanent_of, ComplexMatrix};

/// Which per-subset factor to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Factor {
    /// `|per U(K|s)|^2 / s!`.
    Quantum,
    /// Quantum factor with interference cut off at order `R`.
    TruncatedQuantum(usize),
    /// `per |U|^2(K|r) / r!`.
    Classical,
}

/// `values[mask][rank]` for input subsets `mask` of `0..N` and
/// configurations of `popcount(mask)` bosons in `M` modes.
pub(crate) struct FactorCache {
    indexers: Vec<ConfigurationIndexer>,
    values: Vec<Vec<f64>>,
}

impl FactorCache {
    /// Tabulates `factor` for every input subset whose size is in `sizes`.
    pub(crate) fn build(
        u: &ComplexMatrix,
        n: usize,
        sizes: impl IntoIterator<Item = usize>,
        factor: Factor,
    ) -> Result<Self, ModelsError> {
        let m = u.cols();
        let indexers = (0..=n)
            .map(|k| ConfigurationIndexer::new(k, m))
            .collect::<Result<Vec<_>, _>>()?;
        let mut values = vec![Vec::new(); 1 << n];
        let abs2: Vec<f64> = u.abs_sqr();
        let mut cbuf: Vec<Complex64> = Vec::new();
        let mut rbuf: Vec<f64> = Vec::new();
        for k in sizes {
            for mask in subsets_of_size(n, k) {
                let rows: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let idx = &indexers[k];
                let mut out = Vec::with_capacity(idx.count());
                for ports in idx.port_lists() {
                    let v = match factor {
                        Factor::Quantum => {
                            cbuf.clear();
                            for &r in &rows {
                                cbuf.extend(ports.iter().map(|&c| u[(r, c)]));
                            }
                            permanent_of(&cbuf, k).norm_sqr() / multiset_factorial(&ports)
                        }
                        Factor::TruncatedQuantum(r_cut) => {
                            truncated_quantum_probability(u, &rows, &ports, r_cut)?
                        }
                        Factor::Classical => {
                            rbuf.clear();
                            for &r in &rows {
                                rbuf.extend(ports.iter().map(|&c| abs2[r * m + c]));
                            }
                            permanent_of(&rbuf, k) / multiset_factorial(&ports)
                        }
                    };
                    out.push(v);
                }
                values[mask as usize] = out;
            }
        }
        Ok(Self { indexers, values })
    }

    /// Factor for input subset `mask` and sorted output ports.
    #[inline]
    pub(crate) fn get(&self, mask: u64, sorted_ports: &[usize]) -> f64 {
        let idx = &self.indexers[sorted_ports.len()];
        self.values[mask as usize][idx.rank_ports(sorted_ports)]
    }

    /// `sum_{|K| = k} factor(K, s)` for every configuration `s` of size `k`.
    pub(crate) fn subset_sums(&self, n: usize, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.indexers[k].count()];
        for mask in subsets_of_size(n, k) {
            for (o, v) in out.iter_mut().zip(&self.values[mask as usize]) {
                *o += v;
            }
        }
        out
    }

    /// Factors for input subset `mask` in enumeration order.
    pub(crate) fn values(&self, mask: u64) -> &[f64] {
        &self.values[mask as usize]
    }

    pub(crate) fn indexer(&self, k: usize) -> &ConfigurationIndexer {
        &self.indexers[k]
    }
}
