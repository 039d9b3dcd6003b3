use noisy_boson::analysis::{
    average_tvd_bound, average_tvd_bound_report, binomial_pmf, click_tail, click_tail_report,
    cutoff_r, cutoff_r_formula, cutoff_r_report, d_j, hoeffding_report, hoeffding_tail_bound,
    noise_click_ratio, sufficient_r, sufficient_r_report, tvd, tvd_bound_distinguishability,
    BoundStatus, DjForm,
};
use noisy_boson::linalg::{haar_unitary, NoiseParams};
use noisy_boson::models::{
    click_truncated_distribution, ideal_table, noisy_distribution, partial_dist_decomposed,
    ModelTag, ProbabilityTable, Regime,
};
use noisy_boson::rng::stream;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn binomial_examples() {
    assert_eq!(binomial_pmf(3, 3, 1.0), 1.0);
    assert_eq!(binomial_pmf(2, 3, 1.0), 0.0);
    let half: Vec<f64> = (0..=2).map(|k| binomial_pmf(k, 2, 0.5)).collect();
    assert_eq!(half, vec![0.25, 0.5, 0.25]);
    assert!(close(binomial_pmf(9, 10, 0.9), 0.387_420_489, 1e-12));
}

#[test]
fn tvd_examples() {
    let p = ProbabilityTable::new(1, 2, vec![0.5, 0.5], ModelTag::Classical).unwrap();
    let q = ProbabilityTable::new(1, 2, vec![0.9, 0.1], ModelTag::Classical).unwrap();
    assert!(close(tvd(&p, &q).unwrap(), 0.4, 1e-15));
    assert_eq!(tvd(&p, &p).unwrap(), 0.0);
    let a = ProbabilityTable::new(1, 2, vec![1.0, 0.0], ModelTag::Classical).unwrap();
    let b = ProbabilityTable::new(1, 2, vec![0.0, 1.0], ModelTag::Classical).unwrap();
    assert_eq!(tvd(&a, &b).unwrap(), 1.0);
    let other = ProbabilityTable::new(1, 3, vec![1.0, 0.0, 0.0], ModelTag::Classical).unwrap();
    assert!(tvd(&a, &other).is_err());
}

#[test]
fn d_j_examples() {
    assert_eq!(d_j(4, 0.0, DjForm::Closed).unwrap(), 1.0);
    assert!(close(d_j(2, 0.5, DjForm::Closed).unwrap(), 0.625, 1e-15));
    assert!(close(d_j(2, 0.5, DjForm::Brute).unwrap(), 0.625, 1e-15));
    assert!(close(
        d_j(4, 1.0, DjForm::Closed).unwrap(),
        1.0 / 24.0,
        1e-15
    ));
    assert!(d_j(9, 0.5, DjForm::Brute).is_err());
}

#[test]
fn d_j_forms_agree_and_dominate() {
    for n in 1..=7 {
        for k in 0..=10 {
            let e = k as f64 / 10.0;
            let closed = d_j(n, e, DjForm::Closed).unwrap();
            let brute = d_j(n, e, DjForm::Brute).unwrap();
            assert!(close(closed, brute, 1e-10), "N={n} eps={e}");
            assert!(closed >= (1.0 - e).powi(n as i32) - 1e-15);
        }
    }
}

#[test]
fn distinguishability_tvd_bound() {
    let zero = tvd_bound_distinguishability(3, 0.0, None).unwrap();
    assert_eq!(zero.value, Some(0.0));
    for seed in 0..5 {
        let u = haar_unitary(5, &mut stream(seed, "analysis-test", 0)).unwrap();
        let ideal = ideal_table(&u, 3, 5).unwrap();
        let partial = partial_dist_decomposed(&u, NoiseParams::new(0.3).unwrap(), 3, 5).unwrap();
        let report = tvd_bound_distinguishability(3, 0.3, Some((&ideal, &partial))).unwrap();
        assert_eq!(report.satisfied, BoundStatus::Holds);
        assert!(report.measured.unwrap() <= report.value.unwrap());
    }
    let small = tvd_bound_distinguishability(5, 0.01, None).unwrap();
    assert!(small.value.unwrap() <= 0.0512);
}

#[test]
fn average_bound_examples() {
    assert!(close(
        average_tvd_bound(0.5, 4).unwrap(),
        0.018_076_222,
        1e-8
    ));
    assert_eq!(average_tvd_bound(1.0, 3).unwrap(), 0.0);
    for r in 0..10 {
        assert!(average_tvd_bound(0.3, r + 1).unwrap() < average_tvd_bound(0.3, r).unwrap());
    }
    assert!(average_tvd_bound(0.0, 2).is_err());
    assert_eq!(
        average_tvd_bound_report(0.0, 2, None).satisfied,
        BoundStatus::NotApplicable
    );
}

#[test]
fn cutoff_examples() {
    assert_eq!(cutoff_r(0.5, 0.1).unwrap(), 5);
    assert!(close(cutoff_r_formula(0.5, 0.1).unwrap(), 4.321_928, 1e-6));
    assert!(cutoff_r_formula(0.95, 0.1).unwrap() <= 1.0);
    let bound = average_tvd_bound(0.5, 5).unwrap();
    assert!(bound < 0.1 / 2.0);
    assert!(cutoff_r(0.0, 0.1).is_err() && cutoff_r(1.0, 0.1).is_err());
    assert_eq!(cutoff_r_report(0.5, 0.1).satisfied, BoundStatus::Holds);
}

#[test]
fn click_tail_examples() {
    assert!(close(click_tail(0.3, 5, 0), 1.0, 1e-15));
    assert!(close(click_tail(0.2, 4, 2), 0.1808, 1e-12));
    assert_eq!(click_tail(0.2, 4, 5), 0.0);
    assert_eq!(
        click_tail_report(0.2, 4, 2, Some(0.5)).satisfied,
        BoundStatus::Violated
    );
}

#[test]
fn hoeffding_examples() {
    let h = hoeffding_tail_bound(0.1, 10, 3).unwrap();
    assert!(close(h, 0.215_103_5, 1e-7));
    let tail = click_tail(0.1, 10, 3);
    assert!(close(tail, 0.070_190_8, 1e-7) && tail <= h);
    let edge = hoeffding_tail_bound(0.3, 6, 6).unwrap();
    assert!(close(edge, 0.3f64.powi(6), 1e-15));
    assert!(hoeffding_tail_bound(0.5, 10, 3).is_none());
    assert_eq!(
        hoeffding_report(0.5, 10, 3).satisfied,
        BoundStatus::NotApplicable
    );
}

#[test]
fn sufficient_r_examples() {
    let rs: Vec<usize> = [10, 20, 40, 80]
        .iter()
        .map(|&n| sufficient_r(2.0 / n as f64, n, 0.05).unwrap().r)
        .collect();
    assert!(rs.windows(2).all(|w| w[0] == w[1]), "{rs:?}");
    // the simpler sufficient condition is too loose at N = 10 even though
    // the exact tail drops below 0.01 at R = 10
    let s = sufficient_r(0.5, 10, 0.01).unwrap();
    assert!(!s.found && s.r == 11);
    assert!(click_tail(0.5, 10, 10) <= 0.01);
    let loose = sufficient_r(0.5, 10, 0.5).unwrap();
    assert!(loose.found && loose.r <= 10 && click_tail(0.5, 10, loose.r) <= 0.5);
    let weakest = sufficient_r(0.3, 20, 1.0).unwrap();
    assert_eq!(weakest.r, 7);
    assert_eq!(
        sufficient_r_report(0.5, 10, 0.5).satisfied,
        BoundStatus::Holds
    );
    let none = sufficient_r(0.9, 3, 1e-9).unwrap();
    assert!(!none.found && none.r == 4);
    assert_eq!(
        sufficient_r_report(0.9, 3, 1e-9).satisfied,
        BoundStatus::NotApplicable
    );
}

#[test]
fn noise_click_ratio_examples() {
    assert!(close(noise_click_ratio(0.5, 20, 0.05).unwrap(), 1.0, 1e-15));
    let inverse: Vec<f64> = (1..=10)
        .map(|k| 10 * k)
        .map(|n| noise_click_ratio(1.0 / n as f64, n, 0.05).unwrap())
        .collect();
    assert!(inverse.windows(2).all(|w| w[1] <= w[0]));
    assert!(inverse[9] * 100.0 <= inverse[0] * 10.0 + 1e-12);
    let sqrt: Vec<f64> = [16usize, 64, 256]
        .iter()
        .map(|&n| noise_click_ratio(1.0 / (n as f64).sqrt(), n, 0.05).unwrap())
        .collect();
    assert!(sqrt[0] > sqrt[1] && sqrt[1] > sqrt[2]);
}

#[test]
fn click_truncation_respects_tail_bound() {
    let u = haar_unitary(5, &mut stream(9, "analysis-test", 1)).unwrap();
    for e in [0.1, 0.2, 0.5] {
        let p = NoiseParams::new(e).unwrap();
        let full = noisy_distribution(&u, p, 4, 5, Regime::General).unwrap();
        for r in 1..=5 {
            let cut = click_truncated_distribution(&u, p, r, 4, 5).unwrap();
            let measured = tvd(&full, &cut).unwrap();
            let report = click_tail_report(e, 4, r, Some(measured));
            assert_eq!(report.satisfied, BoundStatus::Holds, "eps={e} R={r}");
        }
    }
}

proptest! {
    #[test]
    fn binomial_sums_to_one(n in 0usize..40, x in 0.0f64..=1.0) {
        let s: f64 = (0..=n).map(|k| binomial_pmf(k, n, x)).sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn hoeffding_dominates_tail(n in 2usize..60, e in 0.01f64..0.9, frac in 0.0f64..1.0) {
        let r = 1 + ((n - 1) as f64 * frac) as usize;
        if let Some(h) = hoeffding_tail_bound(e, n, r) {
            prop_assert!(h + 1e-12 >= click_tail(e, n, r));
        }
    }
}
