use super::{check_range, AnalysisError};
use crate::combinat::{all_permutations, binomial_f64, factorial_f64};
use crate::models::{j_evaluate, DistinguishabilityFunction, ModelsError, ProbabilityTable};

/// Largest `N` for the brute-force `d_J`.
pub const DJ_BRUTE_MAX_N: usize = 8;

/// `B_n(x) = C(N, n) x^n (1-x)^(N-n)`, with `0^0 = 1`.
pub fn binomial_pmf(n: usize, total: usize, x: f64) -> f64 {
    if n > total {
        return 0.0;
    }
    binomial_f64(total, n) * x.powi(n as i32) * (1.0 - x).powi((total - n) as i32)
}

/// `(1/2) sum_m |p(m) - q(m)|`.
pub fn tvd(p: &ProbabilityTable, q: &ProbabilityTable) -> Result<f64, ModelsError> {
    p.same_support(q)?;
    Ok(0.5
        * p.entries()
            .iter()
            .zip(q.entries())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DjForm {
    /// `sum_n eps^n (1-eps)^(N-n) / n!`.
    Closed,
    /// `(1/N!) sum_sigma J(sigma)` with `J` evaluated from the mixed
    /// internal state.
    Brute,
}

/// Weight of the internal state on the fully symmetric subspace.
pub fn d_j(n: usize, eps: f64, form: DjForm) -> Result<f64, AnalysisError> {
    check_range("epsilon", eps, (0.0..=1.0).contains(&eps), "[0, 1]")?;
    match form {
        DjForm::Closed => Ok((0..=n)
            .map(|k| eps.powi(k as i32) * (1.0 - eps).powi((n - k) as i32) / factorial_f64(k))
            .sum()),
        DjForm::Brute => {
            if n > DJ_BRUTE_MAX_N {
                return Err(AnalysisError::TooLarge {
                    n,
                    limit: DJ_BRUTE_MAX_N,
                });
            }
            let j = DistinguishabilityFunction::mixture(n, eps);
            let mut total = 0.0;
            for sigma in all_permutations(n) {
                total += j_evaluate(&j, &sigma).map_err(AnalysisError::from)?.re;
            }
            Ok(total / factorial_f64(n))
        }
    }
}
