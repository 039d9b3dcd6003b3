use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use statrs::distribution::{ContinuousCDF, Normal};

use super::config::{
    BoundName, ExperimentConfig, ModelName, NetworkKind, Scaling, DEFAULT_DRAWS,
    DEFAULT_REALIZATIONS,
};
use super::CliError;
use crate::analysis::{
    average_tvd_bound_report, click_tail, click_tail_report, cutoff_r, cutoff_r_report,
    hoeffding_report, hoeffding_tail_bound, noise_click_ratio, noise_click_ratio_report,
    sufficient_r, sufficient_r_report, tvd_bound_distinguishability, BoundInputs, BoundReport,
};
use crate::combinat::{all_permutations, ConfigurationIndexer};
use crate::linalg::{haar_unitary, matrix_from_csv, ComplexMatrix, NoiseParams, UNITARY_TOL};
use crate::models::{
    classical_table, click_truncated_distribution, ideal_table, j_evaluate, noisy_distribution,
    partial_dist_decomposed, probability_from_j_table, truncated_distribution, uniform_dark_pmf,
    DistinguishabilityFunction, ModelTag, ProbabilityTable, Regime,
};
use crate::rng::stream;
use crate::samplers::{
    chi_square_counts, chi_square_gof, sample_noise_realizations, sample_noisy_compositional,
    sample_table, GOF_LEVEL,
};

/// Size of the perturbation applied by `--corrupt-j`.
const CORRUPTION: f64 = 1e-3;

/// One entry of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(check: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            check,
            max_deviation,
            tolerance,
            pass: max_deviation <= tolerance,
        }
    }
}

fn run_metadata(cfg: &ExperimentConfig, files: &[&str]) -> Value {
    let mut recorded = cfg.clone();
    recorded.output_dir = None;
    json!({
        "toolkit": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config_hash": cfg.hash(),
        "seed": cfg.seed,
        "config": recorded,
        "files": files,
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn noise(cfg: &ExperimentConfig) -> Result<NoiseParams, CliError> {
    Ok(NoiseParams::new(cfg.epsilon()?)?)
}

/// The network matrix: a file if given, else generated from the seed.
fn network(cfg: &ExperimentConfig, m: usize, stream_index: u64) -> Result<ComplexMatrix, CliError> {
    if let Some(path) = &cfg.unitary {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let u = matrix_from_csv(&text)?;
        if u.cols() != m {
            return Err(CliError::Invalid(format!(
                "{} has {} columns but M = {m}",
                path.display(),
                u.cols()
            )));
        }
        if !u.is_square() || !u.is_unitary(UNITARY_TOL) {
            eprintln!(
                "warning: {} is not unitary to {UNITARY_TOL:e}; tables may not be normalized",
                path.display()
            );
        }
        return Ok(u);
    }
    match cfg.network.unwrap_or(NetworkKind::Haar) {
        NetworkKind::Haar => {
            let mut rng = stream(cfg.seed()?, "network", stream_index);
            Ok(haar_unitary(m, &mut rng)?)
        }
        NetworkKind::Fourier => Ok(ComplexMatrix::fourier(m)),
    }
}

fn build_table(
    model: ModelName,
    cfg: &ExperimentConfig,
    u: &ComplexMatrix,
    n: usize,
    m: usize,
) -> Result<ProbabilityTable, CliError> {
    let table = match model {
        ModelName::Ideal => ideal_table(u, n, m)?,
        ModelName::Classical => classical_table(u, n, m)?,
        ModelName::Noisy => noisy_distribution(u, noise(cfg)?, n, m, Regime::General)?,
        ModelName::NoisyNoCollision => {
            noisy_distribution(u, noise(cfg)?, n, m, Regime::NoCollision)?
        }
        ModelName::Partial => partial_dist_decomposed(u, noise(cfg)?, n, m)?,
        ModelName::Truncated => truncated_distribution(u, noise(cfg)?, cfg.r()?, n, m)?,
        ModelName::ClickTruncated => click_truncated_distribution(u, noise(cfg)?, cfg.r()?, n, m)?,
        ModelName::NoiseRealizations => {
            return Err(CliError::Invalid(
                "model noise_realizations has no exact table; use `sample`".into(),
            ))
        }
    };
    let mut metadata = table.metadata.clone();
    metadata.seed = cfg.seed;
    Ok(table.with_metadata(metadata))
}

/// Writes the exact table of the configured model as CSV plus JSON metadata.
pub fn run_distribution(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let (n, m) = (cfg.n()?, cfg.m()?);
    cfg.seed()?;
    let model = cfg.model.unwrap_or(ModelName::Ideal);
    let u = network(cfg, m, 0)?;
    let table = build_table(model, cfg, &u, n, m)?;
    let dir = cfg.output_dir();
    let csv_name = format!("distribution_{}.csv", model.label());
    let json_name = format!("distribution_{}.json", model.label());
    let (min_cfg, min_value) = table.min_entry();
    let meta = json!({
        "run": run_metadata(cfg, &[&csv_name]),
        "table": table.metadata_json(),
        "min_entry": { "m": min_cfg.occupations(), "probability": min_value },
    });
    let csv = write(&dir, &csv_name, &table.to_csv())?;
    let json = write(&dir, &json_name, &pretty(&meta))?;
    println!("{}", csv.display());
    Ok(vec![csv, json])
}

/// Draws samples from the configured model and writes tallies, per-draw
/// records where the sampler produces them, and goodness-of-fit metadata.
pub fn run_sample(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let (n, m) = (cfg.n()?, cfg.m()?);
    let seed = cfg.seed()?;
    let model = cfg.model.unwrap_or(ModelName::Noisy);
    let u = network(cfg, m, 0)?;
    let dir = cfg.output_dir();
    let stem = format!("samples_{}", model.label());
    let mut written = Vec::new();
    let meta = match model {
        ModelName::NoiseRealizations => {
            let realizations = cfg.realizations.unwrap_or(DEFAULT_REALIZATIONS);
            let avg = sample_noise_realizations(&u, noise(cfg)?, n, m, realizations, seed)?;
            let mut csv = String::new();
            for i in 1..=m {
                csv.push_str(&format!("m_{i},"));
            }
            csv.push_str("mean,standard_error\n");
            for ((c, p), se) in avg.mean.iter().zip(&avg.standard_errors) {
                if !c.is_collision_free() {
                    continue;
                }
                for k in c.occupations() {
                    csv.push_str(&format!("{k},"));
                }
                csv.push_str(&format!("{p:e},{se:e}\n"));
            }
            let csv_name = format!("{stem}.csv");
            written.push(write(&dir, &csv_name, &csv)?);
            json!({
                "run": run_metadata(cfg, &[&csv_name]),
                "realizations": realizations,
                "collision_frequency": avg.collision_frequency,
            })
        }
        ModelName::Noisy => {
            let draws = cfg.draws.unwrap_or(DEFAULT_DRAWS);
            let eps = noise(cfg)?;
            let sample = sample_noisy_compositional(&u, eps, n, m, draws, seed)?;
            let mut lines = String::new();
            for rec in &sample.records {
                lines.push_str(&rec.to_json_line());
                lines.push('\n');
            }
            let counts_name = format!("{stem}_counts.csv");
            let records_name = format!("{stem}.jsonl");
            written.push(write(&dir, &counts_name, &sample.distribution.to_csv())?);
            written.push(write(&dir, &records_name, &lines)?);
            let gof = build_table(model, cfg, &u, n, m)
                .ok()
                .and_then(|t| chi_square_gof(&sample.distribution, &t).ok());
            let mut marginal = vec![0u64; n + 1];
            for rec in &sample.records {
                marginal[rec.n_quantum] += 1;
            }
            let binom: Vec<f64> = (0..=n)
                .map(|k| crate::analysis::binomial_pmf(k, n, eps.transmission()))
                .collect();
            let marginal_gof = chi_square_counts(&marginal, &binom).ok();
            json!({
                "run": run_metadata(cfg, &[&counts_name, &records_name]),
                "draws": draws,
                "gof_level": GOF_LEVEL,
                "gof": gof,
                "n_quantum_counts": marginal,
                "n_quantum_gof": marginal_gof,
            })
        }
        _ => {
            let draws = cfg.draws.unwrap_or(DEFAULT_DRAWS);
            let exact = build_table(model, cfg, &u, n, m)?;
            let target = exact.clamped_renormalized()?;
            let emp = sample_table(&target, draws, seed)?;
            let counts_name = format!("{stem}_counts.csv");
            written.push(write(&dir, &counts_name, &emp.to_csv())?);
            json!({
                "run": run_metadata(cfg, &[&counts_name]),
                "draws": draws,
                "gof_level": GOF_LEVEL,
                "gof": chi_square_gof(&emp, &target).ok(),
                "empirical_tvd": emp.tvd_to(&target)?,
            })
        }
    };
    written.push(write(&dir, &format!("{stem}.json"), &pretty(&meta))?);
    println!("{}", written[0].display());
    Ok(written)
}

fn bonferroni_z(cells: usize) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(1.0 - GOF_LEVEL / (2.0 * cells as f64))
}

/// Runs the cross-model checks and writes `verify.json`. Any failed check
/// turns into [`CliError::CheckFailed`] after the report is written.
pub fn run_verify(cfg: &ExperimentConfig, corrupt_j: bool) -> Result<Vec<CheckResult>, CliError> {
    let (n, m) = (cfg.n()?, cfg.m()?);
    let seed = cfg.seed()?;
    let eps = noise(cfg)?;
    let u = network(cfg, m, 0)?;
    let mut checks = Vec::new();

    // distinguishability function: mixture sum against the fixed-point form
    let mixture = DistinguishabilityFunction::mixture(n, eps.epsilon());
    let fixed = DistinguishabilityFunction::fixed_point(n, eps.epsilon());
    let mut dev: f64 = 0.0;
    for sigma in all_permutations(n) {
        dev = dev.max((j_evaluate(&mixture, &sigma)? - j_evaluate(&fixed, &sigma)?).norm());
    }
    checks.push(CheckResult::new("j_identity", dev, 1e-12));

    // permutation double sum against the decomposed table
    let j = if corrupt_j {
        fixed.clone().with_perturbation(CORRUPTION)
    } else {
        fixed.clone()
    };
    let from_j = probability_from_j_table(&u, &j)?;
    let partial = partial_dist_decomposed(&u, eps, n, m)?;
    checks.push(CheckResult::new(
        "j_path_equivalence",
        from_j.max_abs_diff(&partial)?,
        1e-10,
    ));

    let r_cut = cfg.r.unwrap_or(n.saturating_sub(1));
    let r_clicks = cfg.r.unwrap_or(n).clamp(1, n + 1);
    let tables = [
        (
            "normalization_noisy",
            noisy_distribution(&u, eps, n, m, Regime::General)?,
        ),
        ("normalization_partial", partial.clone()),
        (
            "normalization_truncated",
            truncated_distribution(&u, eps, r_cut, n, m)?,
        ),
        (
            "normalization_click_truncated",
            click_truncated_distribution(&u, eps, r_clicks, n, m)?,
        ),
    ];
    for (name, t) in &tables {
        checks.push(CheckResult::new(name, (t.total() - 1.0).abs(), 1e-9));
    }

    // Monte Carlo over noise matrices against the noise-averaged table
    let m_mc = m.max(10 * n * n);
    let u_mc = if m_mc == m {
        u.clone()
    } else {
        let mut rng = stream(seed, "network", 1);
        haar_unitary(m_mc, &mut rng)?
    };
    let realizations = cfg.realizations.unwrap_or(DEFAULT_REALIZATIONS);
    let avg = sample_noise_realizations(&u_mc, eps, n, m_mc, realizations, seed)?;
    let exact = noisy_distribution(&u_mc, eps, n, m_mc, Regime::NoCollision)?;
    let mut worst: f64 = 0.0;
    let mut cells = 0usize;
    for ((c, (&mc, &ex)), &se) in avg
        .mean
        .indexer()
        .configurations()
        .zip(avg.mean.entries().iter().zip(exact.entries()))
        .zip(&avg.standard_errors)
    {
        if !c.is_collision_free() {
            continue;
        }
        cells += 1;
        let diff = (mc - ex).abs();
        let z = if se > 0.0 {
            diff / se
        } else if diff <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(z);
    }
    checks.push(CheckResult::new(
        "noise_monte_carlo",
        worst,
        bonferroni_z(cells),
    ));
    checks.push(CheckResult::new(
        "collision_frequency",
        avg.collision_frequency,
        5.0 * (n * n) as f64 / m_mc as f64,
    ));

    // on a network with |U_kl|^2 = 1/M the classical law and full noise
    // both reduce to uniformly dropped particles
    let fourier = ComplexMatrix::fourier(m);
    let classical = classical_table(&fourier, n, m)?;
    let all_noise = noisy_distribution(&u, NoiseParams::new(1.0)?, n, m, Regime::General)?;
    let idx = ConfigurationIndexer::new(n, m)?;
    let uniform: Vec<f64> = idx.configurations().map(|c| uniform_dark_pmf(&c)).collect();
    let uniform = ProbabilityTable::new(n, m, uniform, ModelTag::Classical)?;
    let dev = classical
        .max_abs_diff(&uniform)?
        .max(all_noise.max_abs_diff(&uniform)?);
    checks.push(CheckResult::new("uniform_network_coincidence", dev, 1e-12));

    let dir = cfg.output_dir();
    let report = json!({
        "run": run_metadata(cfg, &["verify.json"]),
        "checks": checks,
    });
    write(&dir, "verify.json", &pretty(&report))?;
    for c in &checks {
        println!("{}", serde_json::to_string(c).expect("check serializes"));
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.check).collect();
    if failed.is_empty() {
        Ok(checks)
    } else {
        Err(CliError::CheckFailed(failed.join(", ")))
    }
}

fn bound_reports(cfg: &ExperimentConfig) -> Result<Vec<BoundReport>, CliError> {
    let eps = noise(cfg)?.epsilon();
    let eps_err = cfg.eps_err();
    let which = cfg.bound.unwrap_or(BoundName::All);
    let wants = |b: BoundName| which == BoundName::All || which == b;
    let missing_r = |name: &'static str, n: Option<usize>| {
        BoundReport::not_applicable(
            name,
            BoundInputs {
                n,
                epsilon: Some(eps),
                ..Default::default()
            },
        )
    };
    let mut out = Vec::new();
    if wants(BoundName::DistinguishabilityTvd) {
        out.push(tvd_bound_distinguishability(cfg.n()?, eps, None)?);
    }
    if wants(BoundName::AverageTvd) {
        out.push(match cfg.r {
            Some(r) => average_tvd_bound_report(eps, r, None),
            None => missing_r("average_tvd", None),
        });
    }
    if wants(BoundName::CutoffR) {
        out.push(cutoff_r_report(eps, eps_err));
    }
    if wants(BoundName::ClickTail) {
        out.push(match cfg.r {
            Some(r) => click_tail_report(eps, cfg.n()?, r, None),
            None => missing_r("click_tail", cfg.n),
        });
    }
    if wants(BoundName::Hoeffding) {
        out.push(match cfg.r {
            Some(r) => hoeffding_report(eps, cfg.n()?, r),
            None => missing_r("hoeffding_tail", cfg.n),
        });
    }
    if wants(BoundName::SufficientR) {
        out.push(sufficient_r_report(eps, cfg.n()?, eps_err));
    }
    if wants(BoundName::NoiseClickRatio) {
        out.push(noise_click_ratio_report(eps, cfg.n()?, eps_err));
    }
    Ok(out)
}

/// Evaluates the analytic bounds at one point and writes `bounds.jsonl`.
pub fn run_bounds(cfg: &ExperimentConfig) -> Result<Vec<BoundReport>, CliError> {
    cfg.seed()?;
    let reports = bound_reports(cfg)?;
    let mut lines = String::new();
    for r in &reports {
        lines.push_str(&r.to_json_line());
        lines.push('\n');
    }
    let dir = cfg.output_dir();
    write(&dir, "bounds.jsonl", &lines)?;
    write(
        &dir,
        "bounds.json",
        &pretty(&run_metadata(cfg, &["bounds.jsonl"])),
    )?;
    print!("{lines}");
    Ok(reports)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One sweep row: `n,epsilon,sufficient_r,sufficient_r_found,click_tail,hoeffding,noise_click_ratio,cutoff_r`.
fn sweep_row(n: usize, eps: f64, eps_err: f64) -> Result<String, CliError> {
    let s = sufficient_r(eps, n, eps_err)?;
    let (tail, hoeff) = if s.found {
        (
            Some(click_tail(eps, n, s.r)),
            hoeffding_tail_bound(eps, n, s.r),
        )
    } else {
        (None, None)
    };
    Ok(format!(
        "{n},{eps},{},{},{},{},{},{}\n",
        s.r,
        s.found,
        opt(tail),
        opt(hoeff),
        opt(noise_click_ratio(eps, n, eps_err).ok()),
        opt(cutoff_r(eps, eps_err).ok()),
    ))
}

/// Tabulates the click bounds with `N` (or epsilon) on the rows and writes
/// `sweep.csv`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.seed()?;
    let eps_err = cfg.eps_err();
    let mut csv = String::from(
        "n,epsilon,sufficient_r,sufficient_r_found,click_tail,hoeffding,noise_click_ratio,cutoff_r\n",
    );
    if let Some(eps_list) = &cfg.eps_list {
        let n = cfg.n()?;
        for &eps in eps_list {
            NoiseParams::new(eps)?;
            csv.push_str(&sweep_row(n, eps, eps_err)?);
        }
    } else {
        let ns = cfg
            .n_list
            .clone()
            .unwrap_or_else(|| (1..=10).map(|k| 10 * k).collect());
        let scaling = cfg.scaling.unwrap_or(Scaling::InverseN);
        let c = cfg.c.ok_or(CliError::Missing("c"))?;
        for n in ns {
            let eps = match scaling {
                Scaling::InverseN => c / n as f64,
                Scaling::InverseSqrtN => c / (n as f64).sqrt(),
                Scaling::Fixed => c,
            };
            NoiseParams::new(eps)?;
            csv.push_str(&sweep_row(n, eps, eps_err)?);
        }
    }
    let dir = cfg.output_dir();
    write(&dir, "sweep.csv", &csv)?;
    write(
        &dir,
        "sweep.json",
        &pretty(&run_metadata(cfg, &["sweep.csv"])),
    )?;
    print!("{csv}");
    Ok(csv)
}
