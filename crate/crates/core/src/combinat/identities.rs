//! Two-sided evaluations of the summation identities that relate sums over
//! output configurations to sums over port labels.

use super::configuration::{enumerate_configurations, subsets_of_size, OutputConfiguration};
use super::counting::{binomial_f64, factorial_f64};
use super::CombinatError;

/// Largest `N` accepted by the sub-configuration identity check.
pub const IDENTITY_MAX_N: usize = 8;
const IDENTITY_TOL: f64 = 1e-12;

/// Both sides of
/// `sum_{s ⊂ m, |s| = n} f(s, r) = sum_{j_1 < ... < j_n} f(s_j, r_j) prod_a C(m_a, s_a)^{-1}`,
/// where the right side chooses `n` of the `N` port labels of `m` by
/// position.
pub fn symmetric_sum_sides(
    m: &OutputConfiguration,
    n: usize,
    f: impl Fn(&OutputConfiguration, &OutputConfiguration) -> f64,
) -> Result<(f64, f64), CombinatError> {
    let total = m.total();
    if total > IDENTITY_MAX_N {
        return Err(CombinatError::IdentityTooLarge {
            n: total,
            limit: IDENTITY_MAX_N,
        });
    }
    if n > total {
        return Err(CombinatError::SubsetTooLarge { n, total });
    }
    let modes = m.modes();
    let lhs: f64 = super::enumerate_subconfigurations(m, n)?
        .iter()
        .map(|(s, r)| f(s, r))
        .sum();

    let ports = m.ports();
    let mut rhs = 0.0;
    for mask in subsets_of_size(total, n) {
        let (chosen, rest): (Vec<_>, Vec<_>) = ports
            .iter()
            .enumerate()
            .partition(|(i, _)| mask & (1 << i) != 0);
        let s_ports: Vec<usize> = chosen.into_iter().map(|(_, &p)| p).collect();
        let r_ports: Vec<usize> = rest.into_iter().map(|(_, &p)| p).collect();
        let s = OutputConfiguration::from_ports(&s_ports, modes)?;
        let r = OutputConfiguration::from_ports(&r_ports, modes)?;
        let weight: f64 = m
            .occupations()
            .iter()
            .zip(s.occupations())
            .map(|(&ma, &sa)| 1.0 / binomial_f64(ma as usize, sa as usize))
            .product();
        rhs += weight * f(&s, &r);
    }
    Ok((lhs, rhs))
}

/// Checks the sub-configuration summation identity for a given symmetric
/// `f` to `1e-12` (relative to the magnitude of the sums).
pub fn verify_symmetric_sum_identity(
    m: &OutputConfiguration,
    n: usize,
    f: impl Fn(&OutputConfiguration, &OutputConfiguration) -> f64,
) -> bool {
    match symmetric_sum_sides(m, n, f) {
        Ok((lhs, rhs)) => (lhs - rhs).abs() <= IDENTITY_TOL * lhs.abs().max(rhs.abs()).max(1.0),
        Err(_) => false,
    }
}

/// Both sides of `sum_{|m| = N} f(m) = sum_{l_1..l_N} (m!/N!) f(m(l))`, the
/// second summing over all `M^N` port tuples.
pub fn configuration_sum_sides(
    n: usize,
    modes: usize,
    f: impl Fn(&OutputConfiguration) -> f64,
) -> Result<(f64, f64), CombinatError> {
    let tuples = (modes as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if tuples > super::MAX_CONFIGURATIONS {
        return Err(CombinatError::TooManyConfigurations {
            n,
            m: modes,
            count: tuples,
        });
    }
    let lhs: f64 = enumerate_configurations(n, modes)?.map(|c| f(&c)).sum();
    let n_fact = factorial_f64(n);
    let mut rhs = 0.0;
    let mut tuple = vec![0usize; n];
    loop {
        let c = OutputConfiguration::from_ports(&tuple, modes)?;
        rhs += c.factorial_product() / n_fact * f(&c);
        // odometer increment
        let mut i = 0;
        while i < n {
            tuple[i] += 1;
            if tuple[i] < modes {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok((lhs, rhs))
}
