//! Single-configuration probabilities.

use num_complex::Complex64;

use super::ModelsError;
use crate::combinat::{all_permutations, factorial_f64, OutputConfiguration};
use crate::linalg::{permanent_of, ComplexMatrix, LinalgError};

/// Largest number of bosons for a single ideal or classical probability.
pub const IDEAL_MAX_N: usize = 12;

/// `prod_a m_a!` for a sorted port list.
pub fn multiset_factorial(sorted_ports: &[usize]) -> f64 {
    let mut acc = 1.0;
    let mut run = 0usize;
    for (i, &p) in sorted_ports.iter().enumerate() {
        run = if i > 0 && sorted_ports[i - 1] == p {
            run + 1
        } else {
            1
        };
        acc *= run as f64;
    }
    acc
}

fn check_ports(u: &ComplexMatrix, inputs: &[usize], outputs: &[usize]) -> Result<(), ModelsError> {
    if inputs.len() != outputs.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("{} output bosons", inputs.len()),
            found: format!("{}", outputs.len()),
        }
        .into());
    }
    if inputs.len() > IDEAL_MAX_N {
        return Err(ModelsError::TooManyBosons {
            operation: "single probability",
            n: inputs.len(),
            limit: IDEAL_MAX_N,
        });
    }
    for &k in inputs {
        if k >= u.rows() {
            return Err(LinalgError::IndexOutOfRange {
                index: k,
                bound: u.rows(),
                axis: "row",
            }
            .into());
        }
    }
    Ok(())
}

fn output_ports(u: &ComplexMatrix, s: &OutputConfiguration) -> Result<Vec<usize>, ModelsError> {
    if s.modes() != u.cols() {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("{} modes", u.cols()),
            found: format!("{} modes", s.modes()),
        }
        .into());
    }
    Ok(s.ports())
}

/// `|per U(k|l)|^2 / s!` for indistinguishable bosons entering `inputs` and
/// leaving in configuration `s`.
pub fn ideal_probability(
    u: &ComplexMatrix,
    inputs: &[usize],
    s: &OutputConfiguration,
) -> Result<f64, ModelsError> {
    let ports = output_ports(u, s)?;
    check_ports(u, inputs, &ports)?;
    let sub = u.select(inputs, &ports)?;
    Ok(permanent_of(sub.as_slice(), ports.len()).norm_sqr() / multiset_factorial(&ports))
}

/// `per |U|^2(k|l) / r!` for distinguishable bosons.
pub fn classical_probability(
    u: &ComplexMatrix,
    inputs: &[usize],
    r: &OutputConfiguration,
) -> Result<f64, ModelsError> {
    let ports = output_ports(u, r)?;
    check_ports(u, inputs, &ports)?;
    let sub = u.select(inputs, &ports)?.abs_sqr();
    Ok(permanent_of(&sub, ports.len()) / multiset_factorial(&ports))
}

/// Probability that `|r|` particles dropped independently and uniformly onto
/// `M = r.modes()` ports land in configuration `r`: `|r|! / (r! M^|r|)`.
pub fn uniform_dark_pmf(r: &OutputConfiguration) -> f64 {
    let k = r.total();
    factorial_f64(k) / (r.factorial_product() * (r.modes() as f64).powi(k as i32))
}

/// Independent Poissonian dark counts of rate `nu` on each of the
/// `M = r.modes()` detectors: `nu^|r| e^{-M nu} / r!`.
pub fn poisson_dark_pmf(r: &OutputConfiguration, nu: f64) -> Result<f64, ModelsError> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(ModelsError::InvalidRate(nu));
    }
    let m = r.modes() as f64;
    Ok(nu.powi(r.total() as i32) * (-m * nu).exp() / r.factorial_product())
}

/// Interference-truncated quantum factor
/// `(1/s!) sum_{sigma1, sigma2} theta(C1(sigma1 sigma2^-1) - n + R) prod_a U*_{k_{sigma1(a)}, l_a} U_{k_{sigma2(a)}, l_a}`.
///
/// Grouping the pairs by `tau = sigma1 sigma2^-1` turns the double sum into
/// `sum_tau per F_tau` with `F_tau[i][a] = U*_{k_{tau(i)}, l_a} U_{k_i, l_a}`.
/// For `R >= n` the cut-off is inactive and `|per U(k|l)|^2 / s!` is returned.
pub fn truncated_quantum_probability(
    u: &ComplexMatrix,
    inputs: &[usize],
    sorted_ports: &[usize],
    r_cut: usize,
) -> Result<f64, ModelsError> {
    check_ports(u, inputs, sorted_ports)?;
    let n = inputs.len();
    let s_fact = multiset_factorial(sorted_ports);
    let sub = u.select(inputs, sorted_ports)?;
    if r_cut >= n {
        return Ok(permanent_of(sub.as_slice(), n).norm_sqr() / s_fact);
    }
    let mut f = vec![Complex64::new(0.0, 0.0); n * n];
    let mut total = Complex64::new(0.0, 0.0);
    for tau in all_permutations(n) {
        if tau.fixed_point_count() + r_cut < n {
            continue;
        }
        for i in 0..n {
            for a in 0..n {
                f[i * n + a] = sub[(tau.apply(i), a)].conj() * sub[(i, a)];
            }
        }
        total += permanent_of(&f, n);
    }
    Ok(total.re / s_fact)
}
