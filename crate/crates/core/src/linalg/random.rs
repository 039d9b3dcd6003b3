//! Random matrix ensembles: Haar unitaries, rescaled complex Ginibre
//! matrices, and the Gaussian-noise mixture of a network with noise.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, LinalgError};

/// Noise amplitude of the Gaussian noise model, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseParams {
    epsilon: f64,
}

impl NoiseParams {
    pub fn new(epsilon: f64) -> Result<Self, LinalgError> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(LinalgError::InvalidNoise(epsilon));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(self) -> f64 {
        self.epsilon
    }

    /// Probability that a boson keeps interfering, `1 - epsilon`.
    pub fn transmission(self) -> f64 {
        1.0 - self.epsilon
    }
}

/// A standard complex Gaussian rescaled so that `<|z|^2> = 1/norm_dim`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// `rows x cols` matrix of i.i.d. complex Gaussians with zero mean and
/// variance `1/norm_dim`, split equally between real and imaginary parts.
pub fn gaussian_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    norm_dim: usize,
    rng: &mut R,
) -> Result<ComplexMatrix, LinalgError> {
    if norm_dim == 0 {
        return Err(LinalgError::EmptyDimension("normalization dimension"));
    }
    let scale = 1.0 / (2.0 * norm_dim as f64).sqrt();
    let data = (0..rows * cols)
        .map(|_| complex_gaussian(rng, scale))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data)
}

/// Haar-random `m x m` unitary.
///
/// Columns of a complex Ginibre matrix are orthonormalised by Gram-Schmidt
/// (applied twice for numerical orthogonality). Gram-Schmidt produces the
/// QR factor whose `R` has a positive real diagonal, which is exactly the
/// phase-fixed QR that makes `Q` Haar distributed.
pub fn haar_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<ComplexMatrix, LinalgError> {
    haar_isometry(m, m, rng)
}

/// The first `rows` rows of a Haar-random `m x m` unitary.
///
/// Rows of a Haar unitary are distributed like Gram-Schmidt applied to
/// i.i.d. Gaussian vectors, so only the rows that are actually used need to
/// be generated.
pub fn haar_isometry<R: Rng + ?Sized>(
    rows: usize,
    m: usize,
    rng: &mut R,
) -> Result<ComplexMatrix, LinalgError> {
    if m == 0 {
        return Err(LinalgError::EmptyDimension("unitary dimension"));
    }
    if rows > m {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("at most {m} rows"),
            found: format!("{rows} rows"),
        });
    }
    let mut vecs: Vec<Vec<Complex64>> = (0..rows)
        .map(|_| (0..m).map(|_| complex_gaussian(rng, 1.0)).collect())
        .collect();
    for i in 0..rows {
        let (done, rest) = vecs.split_at_mut(i);
        let v = &mut rest[0];
        for _pass in 0..2 {
            for q in done.iter() {
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    // Gram-Schmidt ran on rows; the Haar measure is invariant under
    // transposition so rows can be used directly.
    let data = vecs.into_iter().flatten().collect();
    ComplexMatrix::from_vec(rows, m, data)
}

/// Elementwise `sqrt(1 - eps) U + sqrt(eps) Z` for matrices of equal shape.
pub fn noisy_mixture(
    u: &ComplexMatrix,
    z: &ComplexMatrix,
    eps: NoiseParams,
) -> Result<ComplexMatrix, LinalgError> {
    if (u.rows(), u.cols()) != (z.rows(), z.cols()) {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("{}x{} noise matrix", u.rows(), u.cols()),
            found: format!("{}x{}", z.rows(), z.cols()),
        });
    }
    let a = eps.transmission().sqrt();
    let b = eps.epsilon().sqrt();
    let data = u
        .as_slice()
        .iter()
        .zip(z.as_slice())
        .map(|(x, y)| x * a + y * b)
        .collect();
    ComplexMatrix::from_vec(u.rows(), u.cols(), data)
}

/// Noisy submatrix `sqrt(1 - eps) U(k|l) + sqrt(eps) Z` on the selected input
/// rows and output columns. `z` must already have the submatrix shape; the
/// noise model is only meant for submatrices of size `O(N)`.
pub fn noisy_submatrix(
    u: &ComplexMatrix,
    z: &ComplexMatrix,
    eps: NoiseParams,
    input_ports: &[usize],
    output_ports: &[usize],
) -> Result<ComplexMatrix, LinalgError> {
    let sub = u.select(input_ports, output_ports)?;
    noisy_mixture(&sub, z, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_one_by_one_is_a_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(1, &mut rng).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [2, 4, 9, 30] {
            let u = haar_unitary(m, &mut rng).unwrap();
            assert!(u.unitarity_defect() <= 1e-10, "m={m}");
            assert!(u.dagger().is_unitary(1e-10));
        }
    }

    #[test]
    fn isometry_rows_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = haar_isometry(3, 50, &mut rng).unwrap();
        let gram = v.matmul(&v.dagger()).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(haar_unitary(0, &mut rng).is_err());
        assert!(gaussian_matrix(2, 2, 0, &mut rng).is_err());
    }

    #[test]
    fn noise_limits_and_value() {
        let u = ComplexMatrix::from_real_rows(&[vec![0.6]]).unwrap();
        let z = ComplexMatrix::from_real_rows(&[vec![0.2]]).unwrap();
        let at = |e: f64| {
            noisy_submatrix(&u, &z, NoiseParams::new(e).unwrap(), &[0], &[0]).unwrap()[(0, 0)].re
        };
        assert_eq!(at(0.0), 0.6);
        assert_eq!(at(1.0), 0.2);
        let expected = 0.75f64.sqrt() * 0.6 + 0.5 * 0.2;
        assert!((at(0.25) - expected).abs() < 1e-15);
        assert!((at(0.25) - 0.619_615_242_270_663_2).abs() < 1e-12);
    }

    #[test]
    fn noise_amplitude_is_validated() {
        assert!(NoiseParams::new(-0.1).is_err());
        assert!(NoiseParams::new(1.5).is_err());
        assert!(NoiseParams::new(f64::NAN).is_err());
    }
}
