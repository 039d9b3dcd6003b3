use serde::Serialize;

use super::stats::{binomial_pmf, d_j, tvd, DjForm};
use super::{check_range, AnalysisError};
use crate::combinat::factorial_f64;
use crate::models::ProbabilityTable;

/// Amount by which an exact quantity must exceed its bound before the bound
/// is reported as violated.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_err: Option<f64>,
}

/// One evaluated bound. `value` is `None` only when the bound is not
/// applicable; `measured` is the exact quantity it was compared against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_name: &'static str,
    pub value: Option<f64>,
    pub measured: Option<f64>,
    pub inputs: BoundInputs,
    pub satisfied: BoundStatus,
}

impl BoundReport {
    fn compare(bound_name: &'static str, value: f64, measured: f64, inputs: BoundInputs) -> Self {
        let satisfied = if measured > value + BOUND_SLACK {
            BoundStatus::Violated
        } else {
            BoundStatus::Holds
        };
        Self {
            bound_name,
            value: Some(value),
            measured: Some(measured),
            inputs,
            satisfied,
        }
    }

    /// A value whose own consistency condition was checked.
    fn checked(bound_name: &'static str, value: f64, ok: bool, inputs: BoundInputs) -> Self {
        let satisfied = if ok {
            BoundStatus::Holds
        } else {
            BoundStatus::Violated
        };
        Self {
            bound_name,
            value: Some(value),
            measured: None,
            inputs,
            satisfied,
        }
    }

    pub fn not_applicable(bound_name: &'static str, inputs: BoundInputs) -> Self {
        Self {
            bound_name,
            value: None,
            measured: None,
            inputs,
            satisfied: BoundStatus::NotApplicable,
        }
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// `1 - d_J(N)`, the distance bound between partially distinguishable and
/// ideal bosons. With tables the measured TVD is compared to it; without,
/// the report checks `d_J >= (1 - eps)^N`.
pub fn tvd_bound_distinguishability(
    n: usize,
    eps: f64,
    tables: Option<(&ProbabilityTable, &ProbabilityTable)>,
) -> Result<BoundReport, AnalysisError> {
    let dj = d_j(n, eps, DjForm::Closed)?;
    let value = 1.0 - dj;
    let inputs = BoundInputs {
        n: Some(n),
        epsilon: Some(eps),
        ..Default::default()
    };
    Ok(match tables {
        Some((ideal, partial)) => {
            let measured = tvd(ideal, partial)?;
            let inputs = BoundInputs {
                m: Some(ideal.modes()),
                ..inputs
            };
            BoundReport::compare("distinguishability_tvd", value, measured, inputs)
        }
        None => BoundReport::checked(
            "distinguishability_tvd",
            value,
            value <= 1.0 - (1.0 - eps).powi(n as i32) + BOUND_SLACK,
            inputs,
        ),
    })
}

/// `(1/2) (1 + e/(R+2)!)^(1/2) (1-eps)^(R+1) / sqrt(eps (2 - eps))`.
pub fn average_tvd_bound(eps: f64, r: usize) -> Result<f64, AnalysisError> {
    check_range("epsilon", eps, eps > 0.0 && eps <= 1.0, "(0, 1]")?;
    let growth = (1.0 + std::f64::consts::E / factorial_f64(r + 2)).sqrt();
    Ok(0.5 * growth * (1.0 - eps).powi(r as i32 + 1) / (eps * (2.0 - eps)).sqrt())
}

pub fn average_tvd_bound_report(eps: f64, r: usize, measured: Option<f64>) -> BoundReport {
    let inputs = BoundInputs {
        epsilon: Some(eps),
        r: Some(r),
        ..Default::default()
    };
    match (average_tvd_bound(eps, r), measured) {
        (Err(_), _) => BoundReport::not_applicable("average_tvd", inputs),
        (Ok(v), Some(m)) => BoundReport::compare("average_tvd", v, m, inputs),
        (Ok(v), None) => {
            // the bound must shrink strictly with R while eps < 1
            let next = average_tvd_bound(eps, r + 1).expect("epsilon already validated");
            BoundReport::checked("average_tvd", v, next < v || eps == 1.0, inputs)
        }
    }
}

/// Real-valued cut-off `ln(sqrt(2)/(eps_err sqrt(eps))) / ln(1/(1-eps))`.
pub fn cutoff_r_formula(eps: f64, eps_err: f64) -> Result<f64, AnalysisError> {
    check_range("epsilon", eps, eps > 0.0 && eps < 1.0, "(0, 1)")?;
    check_range("eps_err", eps_err, eps_err > 0.0, "(0, inf)")?;
    Ok((2f64.sqrt() / (eps_err * eps.sqrt())).ln() / (1.0 / (1.0 - eps)).ln())
}

/// Smallest non-negative integer at or above [`cutoff_r_formula`].
pub fn cutoff_r(eps: f64, eps_err: f64) -> Result<usize, AnalysisError> {
    Ok(cutoff_r_formula(eps, eps_err)?.ceil().max(0.0) as usize)
}

/// Reports the cut-off and checks that the average bound at it is below
/// `eps_err / 2`.
pub fn cutoff_r_report(eps: f64, eps_err: f64) -> BoundReport {
    let inputs = BoundInputs {
        epsilon: Some(eps),
        eps_err: Some(eps_err),
        ..Default::default()
    };
    match cutoff_r(eps, eps_err) {
        Err(_) => BoundReport::not_applicable("cutoff_r", inputs),
        Ok(r) => {
            let avg = average_tvd_bound(eps, r).expect("epsilon already validated");
            BoundReport {
                measured: Some(avg),
                ..BoundReport::checked(
                    "cutoff_r",
                    r as f64,
                    avg < eps_err / 2.0,
                    BoundInputs {
                        r: Some(r),
                        ..inputs
                    },
                )
            }
        }
    }
}

/// Exact binomial tail `sum_{s=R}^{N} B_s(eps)`; zero for `R > N`.
pub fn click_tail(eps: f64, n: usize, r: usize) -> f64 {
    (r..=n).map(|s| binomial_pmf(s, n, eps)).sum()
}

pub fn click_tail_report(eps: f64, n: usize, r: usize, measured: Option<f64>) -> BoundReport {
    let value = click_tail(eps, n, r);
    let inputs = BoundInputs {
        n: Some(n),
        epsilon: Some(eps),
        r: Some(r),
        ..Default::default()
    };
    match measured {
        Some(m) => BoundReport::compare("click_tail", value, m, inputs),
        None => BoundReport::checked(
            "click_tail",
            value,
            (0.0..=1.0 + BOUND_SLACK).contains(&value),
            inputs,
        ),
    }
}

/// `(N eps/R)^R ((1-eps)/(1-R/N))^(N-R)` for `eps < R/N <= 1`. At `R = N` the
/// second factor is `x^0 = 1`.
pub fn hoeffding_tail_bound(eps: f64, n: usize, r: usize) -> Option<f64> {
    if n == 0 || r > n || !(0.0..1.0).contains(&eps) {
        return None;
    }
    let ratio = r as f64 / n as f64;
    if eps >= ratio {
        return None;
    }
    let first = (n as f64 * eps / r as f64).powi(r as i32);
    let second = if r == n {
        1.0
    } else {
        ((1.0 - eps) / (1.0 - ratio)).powi((n - r) as i32)
    };
    Some(first * second)
}

/// Hoeffding bound compared against the exact tail.
pub fn hoeffding_report(eps: f64, n: usize, r: usize) -> BoundReport {
    let inputs = BoundInputs {
        n: Some(n),
        epsilon: Some(eps),
        r: Some(r),
        ..Default::default()
    };
    match hoeffding_tail_bound(eps, n, r) {
        None => BoundReport::not_applicable("hoeffding_tail", inputs),
        Some(v) => BoundReport::compare("hoeffding_tail", v, click_tail(eps, n, r), inputs),
    }
}

/// Result of the sufficient-`R` scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SufficientR {
    pub r: usize,
    /// `false` when no `R <= N` satisfies the condition; `r` is then `N + 1`.
    pub found: bool,
}

/// Smallest `R > eps N` with `(R / (e eps N))^R >= e^{-eps N} / eps_err`,
/// scanning upward from `floor(eps N) + 1`.
pub fn sufficient_r(eps: f64, n: usize, eps_err: f64) -> Result<SufficientR, AnalysisError> {
    check_range("epsilon", eps, eps > 0.0 && eps < 1.0, "(0, 1)")?;
    check_range(
        "eps_err",
        eps_err,
        eps_err > 0.0 && eps_err <= 1.0,
        "(0, 1]",
    )?;
    let mean = eps * n as f64;
    let start = mean.floor() as usize + 1;
    // compare logarithms: R ln(R / (e eps N)) >= -eps N - ln(eps_err)
    let rhs = -mean - eps_err.ln();
    for r in start..=n {
        let rf = r as f64;
        if rf * (rf / (std::f64::consts::E * mean)).ln() >= rhs {
            return Ok(SufficientR { r, found: true });
        }
    }
    Ok(SufficientR {
        r: n + 1,
        found: false,
    })
}

/// Reports the sufficient `R` and checks that the exact tail at it is at
/// most `eps_err`.
pub fn sufficient_r_report(eps: f64, n: usize, eps_err: f64) -> BoundReport {
    let inputs = BoundInputs {
        n: Some(n),
        epsilon: Some(eps),
        eps_err: Some(eps_err),
        ..Default::default()
    };
    match sufficient_r(eps, n, eps_err) {
        Ok(SufficientR { r, found: true }) => {
            let tail = click_tail(eps, n, r);
            let inputs = BoundInputs {
                r: Some(r),
                ..inputs
            };
            BoundReport {
                measured: Some(tail),
                ..BoundReport::checked(
                    "sufficient_r",
                    r as f64,
                    tail <= eps_err + BOUND_SLACK,
                    inputs,
                )
            }
        }
        _ => BoundReport::not_applicable("sufficient_r", inputs),
    }
}

/// `R/N` for `R = max(sufficient_R, ceil(2 eps N))`.
pub fn noise_click_ratio(eps: f64, n: usize, eps_err: f64) -> Result<f64, AnalysisError> {
    let s = sufficient_r(eps, n, eps_err)?;
    let doubled = (2.0 * eps * n as f64).ceil() as usize;
    Ok(s.r.max(doubled) as f64 / n as f64)
}

pub fn noise_click_ratio_report(eps: f64, n: usize, eps_err: f64) -> BoundReport {
    let inputs = BoundInputs {
        n: Some(n),
        epsilon: Some(eps),
        eps_err: Some(eps_err),
        ..Default::default()
    };
    match noise_click_ratio(eps, n, eps_err) {
        Err(_) => BoundReport::not_applicable("noise_click_ratio", inputs),
        Ok(v) => BoundReport::checked(
            "noise_click_ratio",
            v,
            v > 0.0 && v <= (n as f64 + 1.0) / n as f64,
            inputs,
        ),
    }
}
