//! Table builders for the binomially decomposed models.
//!
//! Each model has the shape
//! `p(m) = sum_n w_n sum_{|K| = n} sum_{s ⊂ m, |s| = n} A(s|K) B(m - s|K')`,
//! with `w_n = (1-eps)^n eps^(N-n)` (the binomial weight divided by `C(N, n)`),
//! `K'` the complement of `K` in the inputs, `A` a quantum factor and `B`
//! either the uniform dark-count law or a classical factor.

use super::factors::{Factor, FactorCache};
use super::probability::multiset_factorial;
use super::{check_network, guard_n, ModelTag, ModelsError, ProbabilityTable, TableMetadata};
use super::{DECOMPOSED_MAX_N, NOISY_MAX_N};
use crate::combinat::{binomial_f64, factorial_f64, visit_subconfigurations, ConfigurationIndexer};
use crate::linalg::{ComplexMatrix, NoiseParams};

/// Output support of the noise-averaged model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Only collision-free outputs, with dark counts weighted `(N-n)!/M^(N-n)`.
    NoCollision,
    /// Every output configuration; the extension to arbitrary `M >= N`.
    General,
}

fn subset_weight(eps: NoiseParams, n_total: usize, n: usize) -> f64 {
    eps.transmission().powi(n as i32) * eps.epsilon().powi((n_total - n) as i32)
}

/// `|r|! / (r! M^|r|)` for a sorted port list.
fn uniform_dark(r_ports: &[usize], m: usize) -> f64 {
    factorial_f64(r_ports.len())
        / (multiset_factorial(r_ports) * (m as f64).powi(r_ports.len() as i32))
}

fn assemble(
    idx: &ConfigurationIndexer,
    sizes: &[(usize, f64)],
    collision_free_only: bool,
    term: impl Fn(usize, &[usize], &[usize]) -> f64,
) -> Vec<f64> {
    let mut entries = Vec::with_capacity(idx.count());
    for ports in idx.port_lists() {
        if collision_free_only && ports.windows(2).any(|w| w[0] == w[1]) {
            entries.push(0.0);
            continue;
        }
        let mut p = 0.0;
        for &(n, w) in sizes {
            let mut acc = 0.0;
            visit_subconfigurations(&ports, n, &mut |s, r| acc += term(n, s, r));
            p += w * acc;
        }
        entries.push(p);
    }
    entries
}

fn weighted_sizes(
    eps: NoiseParams,
    n_total: usize,
    range: impl Iterator<Item = usize>,
) -> Vec<(usize, f64)> {
    range
        .map(|n| (n, subset_weight(eps, n_total, n)))
        .filter(|&(_, w)| w != 0.0)
        .collect()
}

fn metadata(eps: Option<NoiseParams>, r: Option<usize>) -> TableMetadata {
    TableMetadata {
        epsilon: eps.map(NoiseParams::epsilon),
        r,
        seed: None,
    }
}

/// Indistinguishable bosons from ports `0..N`: `|per U(1..N|m)|^2 / m!`.
pub fn ideal_table(u: &ComplexMatrix, n: usize, m: usize) -> Result<ProbabilityTable, ModelsError> {
    guard_n("ideal table", n, super::IDEAL_MAX_N)?;
    check_network(u, n, m)?;
    let cache = FactorCache::build(u, n, [n], Factor::Quantum)?;
    let entries = cache.subset_sums(n, n);
    ProbabilityTable::from_indexer(cache.indexer(n).clone(), entries, ModelTag::Ideal)
}

/// Distinguishable bosons from ports `0..N`: `per |U|^2(1..N|m) / m!`.
pub fn classical_table(
    u: &ComplexMatrix,
    n: usize,
    m: usize,
) -> Result<ProbabilityTable, ModelsError> {
    guard_n("classical table", n, super::IDEAL_MAX_N)?;
    check_network(u, n, m)?;
    let cache = FactorCache::build(u, n, [n], Factor::Classical)?;
    let entries = cache.subset_sums(n, n);
    ProbabilityTable::from_indexer(cache.indexer(n).clone(), entries, ModelTag::Classical)
}

/// Noise-averaged output distribution: `n ~ B(N, 1-eps)` bosons interfere
/// from a uniformly chosen input subset, the other `N - n` clicks are
/// dropped uniformly on the outputs.
pub fn noisy_distribution(
    u: &ComplexMatrix,
    eps: NoiseParams,
    n: usize,
    m: usize,
    regime: Regime,
) -> Result<ProbabilityTable, ModelsError> {
    guard_n("noisy distribution", n, NOISY_MAX_N)?;
    check_network(u, n, m)?;
    let sizes = weighted_sizes(eps, n, 0..=n);
    let (table, tag) = uniform_dark_model(
        u,
        n,
        m,
        &sizes,
        Factor::Quantum,
        regime == Regime::NoCollision,
    )?;
    let tag = if regime == Regime::NoCollision {
        ModelTag::NoisyNoCollision
    } else {
        tag
    };
    Ok(ProbabilityTable::from_indexer(table.0, table.1, tag)?
        .with_metadata(metadata(Some(eps), None)))
}

type Entries = (ConfigurationIndexer, Vec<f64>);

fn uniform_dark_model(
    u: &ComplexMatrix,
    n: usize,
    m: usize,
    sizes: &[(usize, f64)],
    quantum: Factor,
    collision_free_only: bool,
) -> Result<(Entries, ModelTag), ModelsError> {
    let cache = FactorCache::build(u, n, sizes.iter().map(|&(k, _)| k), quantum)?;
    let mut sums = vec![Vec::new(); n + 1];
    for &(k, _) in sizes {
        sums[k] = cache.subset_sums(n, k);
    }
    let idx = ConfigurationIndexer::new(n, m)?;
    let entries = assemble(&idx, sizes, collision_free_only, |k, s, r| {
        sums[k][cache.indexer(k).rank_ports(s)] * uniform_dark(r, m)
    });
    Ok(((idx, entries), ModelTag::Noisy))
}

fn classical_complement_model(
    u: &ComplexMatrix,
    n: usize,
    m: usize,
    sizes: &[(usize, f64)],
    quantum: Factor,
) -> Result<Entries, ModelsError> {
    let q = FactorCache::build(u, n, sizes.iter().map(|&(k, _)| k), quantum)?;
    let c = FactorCache::build(u, n, sizes.iter().map(|&(k, _)| n - k), Factor::Classical)?;
    let full = (1u64 << n) - 1;
    let idx = ConfigurationIndexer::new(n, m)?;
    let entries = assemble(&idx, sizes, false, |k, s, r| {
        crate::combinat::subsets_of_size(n, k)
            .map(|mask| q.get(mask, s) * c.get(full ^ mask, r))
            .sum()
    });
    Ok((idx, entries))
}

/// Partially distinguishable bosons: the uniform dark-count law of the
/// noisy model is replaced by the classical probability of the
/// non-interfering bosons.
pub fn partial_dist_decomposed(
    u: &ComplexMatrix,
    eps: NoiseParams,
    n: usize,
    m: usize,
) -> Result<ProbabilityTable, ModelsError> {
    guard_n("partial distinguishability table", n, DECOMPOSED_MAX_N)?;
    check_network(u, n, m)?;
    let sizes = weighted_sizes(eps, n, 0..=n);
    let (idx, entries) = classical_complement_model(u, n, m, &sizes, Factor::Quantum)?;
    Ok(
        ProbabilityTable::from_indexer(idx, entries, ModelTag::PartialDistinguishability)?
            .with_metadata(metadata(Some(eps), None)),
    )
}

/// Partial distinguishability with many-boson interference cut off at order
/// `R`. Raw entries are kept even if slightly negative. Any `R >= N` leaves
/// the cut-off inactive and reproduces [`partial_dist_decomposed`].
pub fn truncated_distribution(
    u: &ComplexMatrix,
    eps: NoiseParams,
    r_cut: usize,
    n: usize,
    m: usize,
) -> Result<ProbabilityTable, ModelsError> {
    guard_n("truncated table", n, DECOMPOSED_MAX_N)?;
    check_network(u, n, m)?;
    let sizes = weighted_sizes(eps, n, 0..=n);
    let (idx, entries) =
        classical_complement_model(u, n, m, &sizes, Factor::TruncatedQuantum(r_cut))?;
    Ok(
        ProbabilityTable::from_indexer(idx, entries, ModelTag::Truncated)?
            .with_metadata(metadata(Some(eps), Some(r_cut))),
    )
}

/// [`truncated_distribution`] with the classical factor of the
/// non-interfering bosons replaced by the uniform dark-count law, i.e. the
/// noise-averaged model with interference cut off at order `R`.
pub fn truncated_noisy_distribution(
    u: &ComplexMatrix,
    eps: NoiseParams,
    r_cut: usize,
    n: usize,
    m: usize,
    regime: Regime,
) -> Result<ProbabilityTable, ModelsError> {
    guard_n("truncated table", n, DECOMPOSED_MAX_N)?;
    check_network(u, n, m)?;
    let sizes = weighted_sizes(eps, n, 0..=n);
    let ((idx, entries), _) = uniform_dark_model(
        u,
        n,
        m,
        &sizes,
        Factor::TruncatedQuantum(r_cut),
        regime == Regime::NoCollision,
    )?;
    Ok(
        ProbabilityTable::from_indexer(idx, entries, ModelTag::Truncated)?
            .with_metadata(metadata(Some(eps), Some(r_cut))),
    )
}

/// Noisy model with at most `R - 1` noise clicks, renormalised by
/// `C_R = sum_{n = N-R+1}^{N} B_n(1 - eps)`.
pub fn click_truncated_distribution(
    u: &ComplexMatrix,
    eps: NoiseParams,
    r_clicks: usize,
    n: usize,
    m: usize,
) -> Result<ProbabilityTable, ModelsError> {
    guard_n("click-truncated table", n, NOISY_MAX_N)?;
    if r_clicks < 1 || r_clicks > n + 1 {
        return Err(ModelsError::OutOfRange {
            name: "R",
            value: r_clicks,
            range: format!("1..={}", n + 1),
        });
    }
    check_network(u, n, m)?;
    let lowest = n + 1 - r_clicks;
    let c_r: f64 = (lowest..=n)
        .map(|k| binomial_f64(n, k) * subset_weight(eps, n, k))
        .sum();
    if c_r == 0.0 {
        return Err(ModelsError::EmptyClickSupport { r: r_clicks });
    }
    let sizes: Vec<(usize, f64)> = weighted_sizes(eps, n, lowest..=n)
        .into_iter()
        .map(|(k, w)| (k, w / c_r))
        .collect();
    let ((idx, entries), _) = uniform_dark_model(u, n, m, &sizes, Factor::Quantum, false)?;
    Ok(
        ProbabilityTable::from_indexer(idx, entries, ModelTag::ClickTruncated)?
            .with_metadata(metadata(Some(eps), Some(r_clicks))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::OutputConfiguration;
    use crate::linalg::haar_unitary;
    use rand::SeedableRng;

    fn haar(m: usize, seed: u64) -> ComplexMatrix {
        haar_unitary(m, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn single_boson_closed_form() {
        let u = haar(5, 1);
        let eps = NoiseParams::new(0.3).unwrap();
        let t = noisy_distribution(&u, eps, 1, 5, Regime::General).unwrap();
        for l in 0..5 {
            let mut occ = vec![0u8; 5];
            occ[l] = 1;
            let expected = 0.7 * u[(0, l)].norm_sqr() + 0.3 / 5.0;
            assert!((t.get(&OutputConfiguration::new(occ)).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoints() {
        let u = haar(4, 2);
        let ideal = ideal_table(&u, 3, 4).unwrap();
        let zero =
            noisy_distribution(&u, NoiseParams::new(0.0).unwrap(), 3, 4, Regime::General).unwrap();
        assert!(zero.max_abs_diff(&ideal).unwrap() < 1e-15);
        let one =
            noisy_distribution(&u, NoiseParams::new(1.0).unwrap(), 3, 4, Regime::General).unwrap();
        for (cfg, p) in one.iter() {
            let expected = 6.0 / (cfg.factorial_product() * 64.0);
            assert!((p - expected).abs() < 1e-15);
        }
        let cl = partial_dist_decomposed(&u, NoiseParams::new(1.0).unwrap(), 3, 4).unwrap();
        assert!(
            cl.max_abs_diff(&classical_table(&u, 3, 4).unwrap())
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn argument_guards() {
        let u = haar(4, 3);
        let eps = NoiseParams::new(0.2).unwrap();
        let wide = truncated_distribution(&u, eps, 7, 3, 4).unwrap();
        let partial = partial_dist_decomposed(&u, eps, 3, 4).unwrap();
        assert!(wide.max_abs_diff(&partial).unwrap() < 1e-15);
        assert!(click_truncated_distribution(&u, eps, 0, 3, 4).is_err());
        assert!(click_truncated_distribution(&u, eps, 5, 3, 4).is_err());
        assert!(click_truncated_distribution(&u, NoiseParams::new(1.0).unwrap(), 2, 3, 4).is_err());
        assert!(noisy_distribution(&u, eps, 3, 5, Regime::General).is_err());
        assert!(partial_dist_decomposed(&haar(8, 0), eps, 7, 8).is_err());
    }
}
