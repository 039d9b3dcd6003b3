//! Experiment configuration: a flat TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;

/// Output model for `distribution` and `sample`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ModelName {
    Ideal,
    Classical,
    Noisy,
    NoisyNoCollision,
    Partial,
    Truncated,
    ClickTruncated,
    /// Monte Carlo average over noise matrices (`sample` only).
    NoiseRealizations,
}

impl ModelName {
    pub fn label(self) -> &'static str {
        match self {
            ModelName::Ideal => "ideal",
            ModelName::Classical => "classical",
            ModelName::Noisy => "noisy",
            ModelName::NoisyNoCollision => "noisy_no_collision",
            ModelName::Partial => "partial",
            ModelName::Truncated => "truncated",
            ModelName::ClickTruncated => "click_truncated",
            ModelName::NoiseRealizations => "noise_realizations",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum NetworkKind {
    /// Haar-random unitary drawn from the seed.
    Haar,
    /// Discrete Fourier transform, `|U_kl|^2 = 1/M`.
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum BoundName {
    All,
    DistinguishabilityTvd,
    AverageTvd,
    CutoffR,
    ClickTail,
    Hoeffding,
    SufficientR,
    NoiseClickRatio,
}

/// How the noise amplitude scales with `N` in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `eps = c / N`.
    InverseN,
    /// `eps = c / sqrt(N)`.
    InverseSqrtN,
    /// `eps = c`.
    Fixed,
}

/// Every experiment parameter. Unset fields fall back to per-command
/// defaults or are reported as missing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    #[serde(alias = "N")]
    pub n: Option<usize>,
    #[serde(alias = "M")]
    pub m: Option<usize>,
    pub epsilon: Option<f64>,
    pub eps_err: Option<f64>,
    #[serde(alias = "R")]
    pub r: Option<usize>,
    pub model: Option<ModelName>,
    pub draws: Option<u64>,
    pub realizations: Option<u64>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub network: Option<NetworkKind>,
    pub unitary: Option<PathBuf>,
    pub bound: Option<BoundName>,
    pub scaling: Option<Scaling>,
    pub c: Option<f64>,
    pub n_list: Option<Vec<usize>>,
    pub eps_list: Option<Vec<f64>>,
}

pub const DEFAULT_EPS_ERR: f64 = 0.05;
pub const DEFAULT_DRAWS: u64 = 100_000;
pub const DEFAULT_REALIZATIONS: u64 = 2_000;

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        ExperimentConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(self, top: Self) -> Self {
        let base = self;
        overlay!(
            base,
            top,
            command,
            n,
            m,
            epsilon,
            eps_err,
            r,
            model,
            draws,
            realizations,
            seed,
            output_dir,
            network,
            unitary,
            bound,
            scaling,
            c,
            n_list,
            eps_list
        )
    }

    /// SHA-256 of the configuration without its output directory, in hex.
    pub fn hash(&self) -> String {
        let mut hashed = self.clone();
        hashed.output_dir = None;
        let text = serde_json::to_string(&hashed).expect("configuration serializes");
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn n(&self) -> Result<usize, CliError> {
        self.n.ok_or(CliError::Missing("n"))
    }

    pub fn m(&self) -> Result<usize, CliError> {
        self.m.ok_or(CliError::Missing("m"))
    }

    pub fn epsilon(&self) -> Result<f64, CliError> {
        self.epsilon.ok_or(CliError::Missing("epsilon"))
    }

    pub fn r(&self) -> Result<usize, CliError> {
        self.r.ok_or(CliError::Missing("r"))
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or(CliError::Missing("seed"))
    }

    pub fn eps_err(&self) -> f64 {
        self.eps_err.unwrap_or(DEFAULT_EPS_ERR)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("."))
    }
}
