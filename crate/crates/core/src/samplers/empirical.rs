use std::fmt::Write as _;

use serde::Serialize;

use super::SamplersError;
use crate::combinat::{ConfigurationIndexer, OutputConfiguration};
use crate::models::ProbabilityTable;

/// Tallies of sampled configurations, stored densely in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    indexer: ConfigurationIndexer,
    counts: Vec<u64>,
    total_draws: u64,
}

impl EmpiricalDistribution {
    pub fn new(n: usize, m: usize) -> Result<Self, SamplersError> {
        Ok(Self::from_indexer(ConfigurationIndexer::new(n, m)?))
    }

    pub(crate) fn from_indexer(indexer: ConfigurationIndexer) -> Self {
        let counts = vec![0; indexer.count()];
        Self {
            indexer,
            counts,
            total_draws: 0,
        }
    }

    pub fn bosons(&self) -> usize {
        self.indexer.bosons()
    }

    pub fn modes(&self) -> usize {
        self.indexer.modes()
    }

    pub fn total_draws(&self) -> u64 {
        self.total_draws
    }

    /// Tallies in enumeration order.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, cfg: &OutputConfiguration) -> u64 {
        self.indexer.rank(cfg).map_or(0, |i| self.counts[i])
    }

    /// Adds one draw of the configuration with sorted ports `ports`.
    pub(crate) fn record_ports(&mut self, ports: &[usize]) {
        self.counts[self.indexer.rank_ports(ports)] += 1;
        self.total_draws += 1;
    }

    /// Adds dense tally vectors laid out like [`Self::counts`].
    pub(crate) fn add_counts<'a>(
        &mut self,
        parts: impl Iterator<Item = &'a Vec<u64>>,
    ) -> Result<(), SamplersError> {
        for part in parts {
            if part.len() != self.counts.len() {
                return Err(SamplersError::SupportMismatch);
            }
            for (a, b) in self.counts.iter_mut().zip(part) {
                *a += b;
            }
            self.total_draws += part.iter().sum::<u64>();
        }
        Ok(())
    }

    pub fn record(&mut self, cfg: &OutputConfiguration) -> Result<(), SamplersError> {
        let i = self
            .indexer
            .rank(cfg)
            .ok_or(SamplersError::SupportMismatch)?;
        self.counts[i] += 1;
        self.total_draws += 1;
        Ok(())
    }

    /// Adds the tallies of `other`; the result does not depend on merge order.
    pub fn merge(&mut self, other: &Self) -> Result<(), SamplersError> {
        if self.indexer != other.indexer {
            return Err(SamplersError::SupportMismatch);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total_draws += other.total_draws;
        Ok(())
    }

    /// Configurations with a nonzero tally.
    pub fn iter(&self) -> impl Iterator<Item = (OutputConfiguration, u64)> + '_ {
        self.indexer
            .configurations()
            .zip(self.counts.iter().copied())
            .filter(|&(_, c)| c > 0)
    }

    /// Total variation distance between the relative frequencies and `p`.
    pub fn tvd_to(&self, p: &ProbabilityTable) -> Result<f64, SamplersError> {
        if p.bosons() != self.bosons() || p.modes() != self.modes() {
            return Err(SamplersError::SupportMismatch);
        }
        if self.total_draws == 0 {
            return Err(SamplersError::NoDraws);
        }
        let t = self.total_draws as f64;
        Ok(0.5
            * self
                .counts
                .iter()
                .zip(p.entries())
                .map(|(&c, &q)| (c as f64 / t - q).abs())
                .sum::<f64>())
    }

    /// `m_1,...,m_M,count` for every configuration that was drawn.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.modes() {
            let _ = write!(out, "m_{i},");
        }
        out.push_str("count\n");
        for (cfg, c) in self.iter() {
            for k in cfg.occupations() {
                let _ = write!(out, "{k},");
            }
            let _ = writeln!(out, "{c}");
        }
        out
    }
}

/// One draw of the compositional noisy sampler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRecord {
    pub configuration: OutputConfiguration,
    /// Bosons that interfered.
    pub n_quantum: usize,
    /// Uniformly placed clicks standing in for the lost bosons.
    pub n_noise_clicks: usize,
    /// Stream the draw came from.
    pub seed_tag: u64,
}

#[derive(Serialize)]
struct RecordLine<'a> {
    m: &'a [u8],
    n_quantum: usize,
    stream: u64,
}

impl SampleRecord {
    /// `{"m":[...],"n_quantum":k,"stream":s}`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&RecordLine {
            m: self.configuration.occupations(),
            n_quantum: self.n_quantum,
            stream: self.seed_tag,
        })
        .expect("plain record serializes")
    }
}
