use noisy_boson::linalg::{
    gaussian_matrix, haar_isometry, haar_unitary, matrix_from_csv, matrix_to_csv, noisy_submatrix,
    permanent, permanent_naive, permanent_ryser, ComplexMatrix, LinalgError, NoiseParams,
    PermanentMethod, NAIVE_MAX_ORDER, RYSER_MAX_ORDER,
};
use noisy_boson::rng::stream;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_entries(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
}

fn square(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_entries(n).prop_map(move |v| ComplexMatrix::from_vec(n, n, v).unwrap())
}

fn sized_square() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=7).prop_flat_map(square)
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

#[test]
fn permanent_examples() {
    let id = ComplexMatrix::identity(3);
    for method in [PermanentMethod::Naive, PermanentMethod::Ryser] {
        assert!((permanent(&id, method).unwrap() - 1.0).norm() < 1e-15);
    }
    let a = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    assert!((permanent(&a, PermanentMethod::Ryser).unwrap() - 10.0).norm() < 1e-14);
    let ones = ComplexMatrix::from_real_rows(&vec![vec![1.0; 4]; 4]).unwrap();
    for method in [PermanentMethod::Naive, PermanentMethod::Ryser] {
        assert!((permanent(&ones, method).unwrap() - 24.0).norm() < 1e-12);
    }
}

#[test]
fn permanent_guards() {
    let rect = ComplexMatrix::zeros(2, 3);
    assert!(matches!(
        permanent(&rect, PermanentMethod::Ryser),
        Err(LinalgError::NotSquare { .. })
    ));
    let big = ComplexMatrix::identity(NAIVE_MAX_ORDER + 1);
    assert!(permanent(&big, PermanentMethod::Naive).is_err());
    assert!(permanent(&big, PermanentMethod::Ryser).is_ok());
    let huge = ComplexMatrix::identity(RYSER_MAX_ORDER + 1);
    assert!(permanent(&huge, PermanentMethod::Ryser).is_err());
}

#[test]
fn ryser_matches_naive_at_order_eight() {
    let mut rng = stream(1, "linalg-test", 8);
    for _ in 0..5 {
        let g = gaussian_matrix(8, 8, 1, &mut rng).unwrap();
        let a = permanent_ryser(g.as_slice(), 8);
        let b = permanent_naive(g.as_slice(), 8);
        assert!(rel_err(a, b) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ryser_agrees_with_naive(a in sized_square()) {
        let n = a.rows();
        let r = permanent_ryser(a.as_slice(), n);
        let s = permanent_naive(a.as_slice(), n);
        prop_assert!((r - s).norm() <= 1e-9 * s.norm().max(1.0));
    }

    #[test]
    fn zero_row_gives_zero(a in sized_square(), row in 0usize..7) {
        let n = a.rows();
        let mut z = a.clone();
        for col in 0..n {
            z[(row % n, col)] = c(0.0, 0.0);
        }
        prop_assert_eq!(permanent(&z, PermanentMethod::Ryser).unwrap().norm(), 0.0);
    }

    #[test]
    fn invariant_under_row_and_column_permutations(a in sized_square(), shift in 1usize..7) {
        let n = a.rows();
        let base = permanent(&a, PermanentMethod::Ryser).unwrap();
        let order: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let all: Vec<usize> = (0..n).collect();
        let rows = a.select(&order, &all).unwrap();
        let cols = a.select(&all, &order).unwrap();
        let tol = 1e-10 * base.norm().max(1.0);
        prop_assert!((permanent(&rows, PermanentMethod::Ryser).unwrap() - base).norm() <= tol);
        prop_assert!((permanent(&cols, PermanentMethod::Ryser).unwrap() - base).norm() <= tol);
    }

    #[test]
    fn csv_round_trip_is_exact(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let mut rng = stream(seed, "csv", 0);
        let m = gaussian_matrix(rows, cols, 3, &mut rng).unwrap();
        let back = matrix_from_csv(&matrix_to_csv(&m)).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn haar_is_unitary(m in 1usize..12, seed in any::<u64>()) {
        let mut rng = stream(seed, "haar", 0);
        let u = haar_unitary(m, &mut rng).unwrap();
        prop_assert!(u.unitarity_defect() <= 1e-10);
    }
}

#[test]
fn haar_one_mode_is_a_phase_and_zero_modes_fail() {
    let mut rng = stream(2, "haar", 1);
    let u = haar_unitary(1, &mut rng).unwrap();
    assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    assert!(haar_unitary(0, &mut rng).is_err());
}

#[test]
fn haar_isometry_rows_are_orthonormal() {
    let mut rng = stream(3, "haar", 2);
    let v = haar_isometry(3, 7, &mut rng).unwrap();
    let gram = v.matmul(&v.dagger()).unwrap();
    assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
}

/// Mean of `|U_kl|^2` is `1/M` within five standard errors for every entry.
#[test]
fn haar_second_moments() {
    let draws = 10_000;
    for m in [2usize, 3, 4] {
        let mut rng = stream(4, "haar-moments", m as u64);
        let mut sum = vec![0.0; m * m];
        let mut sq = vec![0.0; m * m];
        for _ in 0..draws {
            let u = haar_unitary(m, &mut rng).unwrap();
            for (i, z) in u.as_slice().iter().enumerate() {
                let p = z.norm_sqr();
                sum[i] += p;
                sq[i] += p * p;
            }
        }
        let d = draws as f64;
        for i in 0..m * m {
            let mean = sum[i] / d;
            let se = ((sq[i] / d - mean * mean) / (d - 1.0)).sqrt();
            assert!((mean - 1.0 / m as f64).abs() <= 5.0 * se, "M={m} entry {i}");
        }
    }
}

#[test]
fn haar_two_mode_mean_over_many_draws() {
    let draws = 100_000;
    let mut rng = stream(5, "haar-moments", 0);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..draws {
        let p = haar_unitary(2, &mut rng).unwrap()[(0, 0)].norm_sqr();
        s += p;
        s2 += p * p;
    }
    let d = draws as f64;
    let mean = s / d;
    let se = ((s2 / d - mean * mean) / (d - 1.0)).sqrt();
    assert!((mean - 0.5).abs() <= 3.0 * se);
}

#[test]
fn gaussian_moments() {
    let n = 1_000_000;
    let mut rng = stream(6, "gaussian", 0);
    let g = gaussian_matrix(1, n, 8, &mut rng).unwrap();
    let d = n as f64;
    let abs2: Vec<f64> = g.as_slice().iter().map(|z| z.norm_sqr()).collect();
    let mean = abs2.iter().sum::<f64>() / d;
    let var = abs2.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (d - 1.0);
    assert!((mean - 0.125).abs() <= 3.0 * (var / d).sqrt());

    let z_mean: Complex64 = g.as_slice().iter().sum::<Complex64>() / d;
    // each component of Z has variance 1/16
    let se = (1.0f64 / 16.0 / d).sqrt();
    assert!(z_mean.re.abs() <= 3.0 * se && z_mean.im.abs() <= 3.0 * se);

    let sq_mean: Complex64 = g.as_slice().iter().map(|z| z * z).sum::<Complex64>() / d;
    // Re Z^2 and Im Z^2 each have variance 2 * (1/16)^2
    let se2 = (2.0f64 / 256.0 / d).sqrt();
    assert!(sq_mean.re.abs() <= 3.0 * se2 && sq_mean.im.abs() <= 3.0 * se2);
}

#[test]
fn gaussian_entries_are_uncorrelated() {
    let draws = 100_000;
    let mut rng = stream(7, "gaussian", 1);
    let mut prods = Vec::with_capacity(draws);
    for _ in 0..draws {
        let g = gaussian_matrix(1, 2, 4, &mut rng).unwrap();
        prods.push(g[(0, 0)] * g[(0, 1)].conj());
    }
    let d = draws as f64;
    let mean: Complex64 = prods.iter().sum::<Complex64>() / d;
    let var_re = prods.iter().map(|p| (p.re - mean.re).powi(2)).sum::<f64>() / (d - 1.0);
    let var_im = prods.iter().map(|p| (p.im - mean.im).powi(2)).sum::<f64>() / (d - 1.0);
    assert!(mean.re.abs() <= 5.0 * (var_re / d).sqrt());
    assert!(mean.im.abs() <= 5.0 * (var_im / d).sqrt());
}

#[test]
fn noisy_submatrix_limits_and_value() {
    let mut rng = stream(8, "noise", 0);
    let u = haar_unitary(5, &mut rng).unwrap();
    let z = gaussian_matrix(2, 2, 5, &mut rng).unwrap();
    let (rows, cols) = ([0usize, 3], [1usize, 4]);
    let sub = u.select(&rows, &cols).unwrap();
    let clean = noisy_submatrix(&u, &z, NoiseParams::new(0.0).unwrap(), &rows, &cols).unwrap();
    assert_eq!(clean, sub);
    let pure = noisy_submatrix(&u, &z, NoiseParams::new(1.0).unwrap(), &rows, &cols).unwrap();
    assert_eq!(pure, z);

    let one = ComplexMatrix::from_real_rows(&[vec![0.6]]).unwrap();
    let zz = ComplexMatrix::from_real_rows(&[vec![0.2]]).unwrap();
    let mixed = noisy_submatrix(&one, &zz, NoiseParams::new(0.25).unwrap(), &[0], &[0]).unwrap();
    assert!((mixed[(0, 0)].re - 0.619_615_242_270_663_2).abs() < 1e-15);

    assert!(noisy_submatrix(&u, &z, NoiseParams::new(0.5).unwrap(), &[0, 9], &cols).is_err());
    assert!(NoiseParams::new(1.5).is_err());
}
