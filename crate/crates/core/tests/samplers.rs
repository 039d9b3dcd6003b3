use noisy_boson::analysis::binomial_pmf;
use noisy_boson::combinat::{ConfigurationIndexer, OutputConfiguration};
use noisy_boson::linalg::{haar_unitary, ComplexMatrix, NoiseParams};
use noisy_boson::models::{
    ideal_table, noisy_distribution, uniform_dark_pmf, ModelTag, ProbabilityTable, Regime,
};
use noisy_boson::rng::stream;
use noisy_boson::samplers::{
    chi_square_counts, chi_square_gof, sample_noise_realizations, sample_noisy_compositional,
    sample_table, EmpiricalDistribution, SamplersError,
};

fn haar(m: usize, index: u64) -> ComplexMatrix {
    haar_unitary(m, &mut stream(2024, "samplers-test", index)).unwrap()
}

fn eps(e: f64) -> NoiseParams {
    NoiseParams::new(e).unwrap()
}

fn uniform_table(n: usize, m: usize) -> ProbabilityTable {
    let idx = ConfigurationIndexer::new(n, m).unwrap();
    let entries = idx.configurations().map(|c| uniform_dark_pmf(&c)).collect();
    ProbabilityTable::new(n, m, entries, ModelTag::Classical).unwrap()
}

#[test]
fn point_mass_always_hits_its_cell() {
    let t = ProbabilityTable::new(2, 2, vec![0.0, 1.0, 0.0], ModelTag::Classical).unwrap();
    let emp = sample_table(&t, 1000, 1).unwrap();
    assert_eq!(emp.count(&OutputConfiguration::new(vec![1, 1])), 1000);
    assert_eq!(emp.total_draws(), 1000);
}

#[test]
fn uniform_tallies_stay_close() {
    let k = 10;
    let t = ProbabilityTable::new(1, k, vec![0.1; k], ModelTag::Classical).unwrap();
    let draws = 100_000u64;
    let emp = sample_table(&t, draws, 7).unwrap();
    let expected = draws as f64 / k as f64;
    let slack = 5.0 * (draws as f64 / k as f64).sqrt();
    for &c in emp.counts() {
        assert!((c as f64 - expected).abs() <= slack, "{c}");
    }
}

#[test]
fn table_sampler_rejects_bad_tables() {
    let neg = ProbabilityTable::new(1, 2, vec![1.1, -0.1], ModelTag::Truncated).unwrap();
    assert!(matches!(
        sample_table(&neg, 10, 0),
        Err(SamplersError::NotNormalized(_))
    ));
    let short = ProbabilityTable::new(1, 2, vec![0.5, 0.4], ModelTag::Classical).unwrap();
    assert!(sample_table(&short, 10, 0).is_err());
}

#[test]
fn ideal_samples_match_table() {
    let u = haar(6, 0);
    let t = ideal_table(&u, 2, 6).unwrap();
    let emp = sample_table(&t, 100_000, 11).unwrap();
    assert!(emp.tvd_to(&t).unwrap() <= 0.02);
    assert!(chi_square_gof(&emp, &t).unwrap().pass);
}

#[test]
fn sampling_is_deterministic_in_the_seed() {
    let t = ideal_table(&haar(5, 1), 2, 5).unwrap();
    let a = sample_table(&t, 50_000, 3).unwrap();
    let b = sample_table(&t, 50_000, 3).unwrap();
    let c = sample_table(&t, 50_000, 4).unwrap();
    assert_eq!(a.counts(), b.counts());
    assert_ne!(a.counts(), c.counts());
}

#[test]
fn merge_adds_tallies() {
    let t = uniform_table(2, 3);
    let mut a = sample_table(&t, 300, 1).unwrap();
    let b = sample_table(&t, 200, 2).unwrap();
    a.merge(&b).unwrap();
    assert_eq!(a.total_draws(), 500);
    assert_eq!(a.counts().iter().sum::<u64>(), 500);
    let other = EmpiricalDistribution::new(2, 4).unwrap();
    assert!(a.merge(&other).is_err());
}

#[test]
fn compositional_without_noise_has_no_dark_clicks() {
    let u = haar(5, 2);
    let s = sample_noisy_compositional(&u, eps(0.0), 3, 5, 20_000, 5).unwrap();
    assert!(s
        .records
        .iter()
        .all(|r| r.n_noise_clicks == 0 && r.n_quantum == 3));
    let t = ideal_table(&u, 3, 5).unwrap();
    assert!(chi_square_gof(&s.distribution, &t).unwrap().pass);
}

#[test]
fn compositional_full_noise_is_uniform_dropping() {
    let u = haar(5, 3);
    let s = sample_noisy_compositional(&u, eps(1.0), 3, 5, 50_000, 6).unwrap();
    assert!(s.records.iter().all(|r| r.n_quantum == 0));
    assert!(
        chi_square_gof(&s.distribution, &uniform_table(3, 5))
            .unwrap()
            .pass
    );
}

#[test]
fn compositional_matches_decomposed_model() {
    let u = haar(9, 4);
    let p = eps(0.4);
    let s = sample_noisy_compositional(&u, p, 3, 9, 200_000, 8).unwrap();
    let t = noisy_distribution(&u, p, 3, 9, Regime::General).unwrap();
    assert!(s.distribution.tvd_to(&t).unwrap() <= 0.02);
    assert!(chi_square_gof(&s.distribution, &t).unwrap().pass);

    let mut tally = vec![0u64; 4];
    for r in &s.records {
        tally[r.n_quantum] += 1;
        assert_eq!(r.n_quantum + r.n_noise_clicks, 3);
    }
    let law: Vec<f64> = (0..=3).map(|k| binomial_pmf(k, 3, 0.6)).collect();
    assert!(chi_square_counts(&tally, &law).unwrap().pass);
}

#[test]
fn compositional_is_deterministic_and_guarded() {
    let u = haar(5, 5);
    let a = sample_noisy_compositional(&u, eps(0.3), 2, 5, 40_000, 9).unwrap();
    let b = sample_noisy_compositional(&u, eps(0.3), 2, 5, 40_000, 9).unwrap();
    assert_eq!(a.distribution.counts(), b.distribution.counts());
    assert_eq!(a.records.len(), 40_000);
    assert!(a
        .records
        .iter()
        .zip(&b.records)
        .all(|(x, y)| x.configuration == y.configuration));
    let big = haar(8, 6);
    assert!(sample_noisy_compositional(&big, eps(0.3), 7, 8, 10, 0).is_err());
}

#[test]
fn realizations_without_noise_reproduce_ideal() {
    let u = haar(10, 7);
    let avg = sample_noise_realizations(&u, eps(0.0), 1, 10, 50, 1).unwrap();
    let t = ideal_table(&u, 1, 10).unwrap();
    assert!(avg.mean.max_abs_diff(&t).unwrap() < 1e-14);
    assert!(avg.standard_errors.iter().all(|&s| s < 1e-6));
    assert_eq!(avg.collision_frequency, 0.0);
}

#[test]
fn single_boson_realizations_match_closed_form() {
    let u = haar(10, 8);
    let e = 0.5;
    let avg = sample_noise_realizations(&u, eps(e), 1, 10, 20_000, 2).unwrap();
    for l in 0..10 {
        let exact = (1.0 - e) * u[(0, l)].norm_sqr() + e / 10.0;
        let dev = (avg.mean.entries()[l] - exact).abs();
        assert!(dev <= 4.0 * avg.standard_errors[l], "port {l}: {dev}");
    }
}

#[test]
fn realizations_guard_mode_count() {
    let u = haar(10, 9);
    assert!(sample_noise_realizations(&u, eps(0.2), 2, 10, 10, 0).is_err());
    assert!(sample_noise_realizations(&u, eps(0.2), 1, 10, 0, 0).is_err());
}

#[test]
fn gof_calibration_and_power() {
    let t = uniform_table(2, 4);
    let mut passes = 0;
    for seed in 0..40 {
        let emp = sample_table(&t, 5_000, seed).unwrap();
        if chi_square_gof(&emp, &t).unwrap().pass {
            passes += 1;
        }
    }
    assert!(passes >= 38, "{passes}");

    let mut shifted = t.entries().to_vec();
    shifted[0] += 0.05;
    shifted[1] -= 0.05;
    let q = ProbabilityTable::new(2, 4, shifted, ModelTag::Classical).unwrap();
    let emp = sample_table(&q, 20_000, 1).unwrap();
    assert!(!chi_square_gof(&emp, &t).unwrap().pass);
}

#[test]
fn gof_rejects_degenerate_input() {
    let t = uniform_table(1, 3);
    let empty = EmpiricalDistribution::new(1, 3).unwrap();
    assert!(chi_square_gof(&empty, &t).is_err());
    let other = EmpiricalDistribution::new(1, 4).unwrap();
    assert!(chi_square_gof(&other, &t).is_err());
    let r = chi_square_counts(&[5, 50, 50], &[0.0, 0.5, 0.5]).unwrap();
    assert!(r.statistic.is_infinite() && !r.pass);
}
