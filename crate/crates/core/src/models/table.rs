use std::fmt::Write as _;

use serde::Serialize;

use super::ModelsError;
use crate::combinat::{ConfigurationIndexer, OutputConfiguration};

/// Which model produced a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    Ideal,
    Classical,
    /// Noise-averaged distribution restricted to collision-free outputs.
    NoisyNoCollision,
    /// Noise-averaged distribution for arbitrary `M >= N`.
    Noisy,
    PartialDistinguishability,
    Truncated,
    ClickTruncated,
    /// Evaluated from a distinguishability function by the permutation double sum.
    DistinguishabilityFunction,
    /// Average over sampled noise matrices.
    NoiseMonteCarlo,
    /// Clamped and renormalised copy of another table.
    Clamped,
}

impl ModelTag {
    pub fn name(self) -> &'static str {
        match self {
            ModelTag::Ideal => "ideal",
            ModelTag::Classical => "classical",
            ModelTag::NoisyNoCollision => "noisy_no_collision",
            ModelTag::Noisy => "noisy",
            ModelTag::PartialDistinguishability => "partial",
            ModelTag::Truncated => "truncated",
            ModelTag::ClickTruncated => "click_truncated",
            ModelTag::DistinguishabilityFunction => "j_function",
            ModelTag::NoiseMonteCarlo => "noise_monte_carlo",
            ModelTag::Clamped => "clamped",
        }
    }
}

/// Parameters recorded alongside a table.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TableMetadata {
    pub epsilon: Option<f64>,
    pub r: Option<usize>,
    pub seed: Option<u64>,
}

/// Probabilities of every configuration of `N` bosons in `M` modes, stored
/// densely in enumeration order.
#[derive(Debug, Clone)]
pub struct ProbabilityTable {
    indexer: ConfigurationIndexer,
    entries: Vec<f64>,
    model: ModelTag,
    pub metadata: TableMetadata,
}

impl ProbabilityTable {
    pub fn new(
        n: usize,
        m: usize,
        entries: Vec<f64>,
        model: ModelTag,
    ) -> Result<Self, ModelsError> {
        let indexer = ConfigurationIndexer::new(n, m)?;
        Self::from_indexer(indexer, entries, model)
    }

    pub(crate) fn from_indexer(
        indexer: ConfigurationIndexer,
        entries: Vec<f64>,
        model: ModelTag,
    ) -> Result<Self, ModelsError> {
        if entries.len() != indexer.count() {
            return Err(ModelsError::TableLength {
                expected: indexer.count(),
                found: entries.len(),
            });
        }
        Ok(Self {
            indexer,
            entries,
            model,
            metadata: TableMetadata::default(),
        })
    }

    pub fn with_metadata(mut self, metadata: TableMetadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn bosons(&self) -> usize {
        self.indexer.bosons()
    }

    pub fn modes(&self) -> usize {
        self.indexer.modes()
    }

    pub fn model(&self) -> ModelTag {
        self.model
    }

    pub fn indexer(&self) -> &ConfigurationIndexer {
        &self.indexer
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Raw probabilities in enumeration order.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, cfg: &OutputConfiguration) -> Option<f64> {
        self.indexer.rank(cfg).map(|i| self.entries[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (OutputConfiguration, f64)> + '_ {
        self.indexer
            .configurations()
            .zip(self.entries.iter().copied())
    }

    /// Sum of all entries, accumulated in enumeration order.
    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol
    }

    /// Smallest raw entry and its configuration.
    pub fn min_entry(&self) -> (OutputConfiguration, f64) {
        let (i, &v) = self
            .entries
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("tables are never empty");
        let cfg = self.indexer.configurations().nth(i).expect("rank in range");
        (cfg, v)
    }

    pub fn same_support(&self, other: &Self) -> Result<(), ModelsError> {
        if self.bosons() != other.bosons() || self.modes() != other.modes() {
            return Err(ModelsError::SupportMismatch {
                n1: self.bosons(),
                m1: self.modes(),
                n2: other.bosons(),
                m2: other.modes(),
            });
        }
        Ok(())
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, ModelsError> {
        self.same_support(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Copy with negative entries set to zero and the rest rescaled to sum to
    /// one. This is what samplers consume; the raw table is left untouched.
    pub fn clamped_renormalized(&self) -> Result<Self, ModelsError> {
        let clamped: Vec<f64> = self.entries.iter().map(|&p| p.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(ModelsError::NotNormalized(total));
        }
        let entries = clamped.into_iter().map(|p| p / total).collect();
        Ok(Self {
            indexer: self.indexer.clone(),
            entries,
            model: ModelTag::Clamped,
            metadata: self.metadata.clone(),
        })
    }

    /// `m_1,...,m_M,probability` with one row per configuration.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.modes() {
            let _ = write!(out, "m_{i},");
        }
        out.push_str("probability\n");
        for (cfg, p) in self.iter() {
            for k in cfg.occupations() {
                let _ = write!(out, "{k},");
            }
            let _ = writeln!(out, "{p:e}");
        }
        out
    }

    /// Metadata sidecar describing this table.
    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.bosons(),
            "m": self.modes(),
            "model": self.model.name(),
            "epsilon": self.metadata.epsilon,
            "r": self.metadata.r,
            "seed": self.metadata.seed,
            "configurations": self.len(),
            "total": self.total(),
        })
    }
}
