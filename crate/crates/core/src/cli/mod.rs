//! Command-line experiment runner.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 for
//! invalid input or a violated size guard.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::combinat::CombinatError;
use crate::linalg::LinalgError;
use crate::models::ModelsError;
use crate::samplers::SamplersError;

pub use self::commands::{
    run_bounds, run_distribution, run_sample, run_sweep, run_verify, CheckResult,
};
pub use self::config::{
    BoundName, ExperimentConfig, ModelName, NetworkKind, Scaling, DEFAULT_DRAWS, DEFAULT_EPS_ERR,
    DEFAULT_REALIZATIONS,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing required parameter `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Models(#[from] ModelsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Samplers(#[from] SamplersError),
    #[error("verification failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "noisy-boson",
    version,
    about = "Exact models, samplers and bounds for noisy Boson Sampling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the exact output distribution of one model.
    Distribution(RunArgs),
    /// Draw samples from a model.
    Sample(RunArgs),
    /// Run the cross-model equivalence checks.
    Verify(RunArgs),
    /// Evaluate the analytic bounds at one point.
    Bounds(RunArgs),
    /// Tabulate the click bounds over a range of N or epsilon.
    Sweep(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with experiment fields; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "eps-err")]
    pub eps_err: Option<f64>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    #[arg(long)]
    pub draws: Option<u64>,
    #[arg(long)]
    pub realizations: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub network: Option<NetworkKind>,
    /// Network matrix file (`row,col,re,im` CSV) instead of a generated one.
    #[arg(long)]
    pub unitary: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub bound: Option<BoundName>,
    #[arg(long, value_enum)]
    pub scaling: Option<Scaling>,
    /// Prefactor of the sweep noise scaling.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long = "n-list", value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long = "eps-list", value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    /// Perturbs the distinguishability function in the path check.
    #[arg(long = "corrupt-j", hide = true)]
    pub corrupt_j: bool,
}

impl RunArgs {
    fn flags(&self) -> ExperimentConfig {
        ExperimentConfig {
            command: None,
            n: self.n,
            m: self.m,
            epsilon: self.epsilon,
            eps_err: self.eps_err,
            r: self.r,
            model: self.model,
            draws: self.draws,
            realizations: self.realizations,
            seed: self.seed,
            output_dir: self.out.clone(),
            network: self.network,
            unitary: self.unitary.clone(),
            bound: self.bound,
            scaling: self.scaling,
            c: self.c,
            n_list: self.n_list.clone(),
            eps_list: self.eps_list.clone(),
        }
    }

    /// Configuration file overlaid by the flags, tagged with `command`.
    pub fn resolve(&self, command: &str) -> Result<ExperimentConfig, CliError> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::from_toml_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(c) = &base.command {
            if c != command {
                return Err(CliError::Config(format!(
                    "file is for command `{c}`, not `{command}`"
                )));
            }
        }
        let mut cfg = base.overlay(self.flags());
        cfg.command = Some(command.to_string());
        Ok(cfg)
    }
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Distribution(a) => run_distribution(&a.resolve("distribution")?).map(|_| ()),
        Command::Sample(a) => run_sample(&a.resolve("sample")?).map(|_| ()),
        Command::Verify(a) => run_verify(&a.resolve("verify")?, a.corrupt_j).map(|_| ()),
        Command::Bounds(a) => run_bounds(&a.resolve("bounds")?).map(|_| ()),
        Command::Sweep(a) => run_sweep(&a.resolve("sweep")?).map(|_| ()),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
