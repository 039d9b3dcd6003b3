//! Distinguishability functions `J(sigma) = Tr{P_sigma rho}` and the output
//! probability they induce.

use num_complex::Complex64;

use super::{check_network, guard_n, ModelTag, ModelsError, ProbabilityTable};
use crate::combinat::{
    all_permutations, subsets_of_size, ConfigurationIndexer, OutputConfiguration, Permutation,
};
use crate::linalg::ComplexMatrix;

/// Largest `N` for the `N!^2`-term probability sum.
pub const J_PROBABILITY_MAX_N: usize = 7;
/// Imaginary residue above which a distinguishability function is reported
/// as non-hermitian.
pub const J_IMAGINARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum JKind {
    /// Completely indistinguishable bosons, `J = 1`.
    Ideal,
    /// Orthogonal internal states, `J = delta_{sigma, I}`.
    Classical,
    /// Each boson in `(1 - eps)|0><0| + eps|k><k|`, evaluated by the
    /// defining sum over the interfering subset.
    Mixture { epsilon: f64 },
    /// Closed form `(1 - eps)^{N - C1(sigma)}`.
    FixedPoint { epsilon: f64 },
    /// Closed form cut off to permutations with at least `N - R` fixed points.
    Truncated { epsilon: f64, r: usize },
    /// Pure internal states with overlaps `G[k][l] = <psi_k|psi_l>`.
    PureOverlap { overlap: ComplexMatrix },
}

/// A distinguishability function on `S_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishabilityFunction {
    n: usize,
    kind: JKind,
    perturbation: f64,
}

impl DistinguishabilityFunction {
    pub fn ideal(n: usize) -> Self {
        Self {
            n,
            kind: JKind::Ideal,
            perturbation: 0.0,
        }
    }

    pub fn classical(n: usize) -> Self {
        Self {
            n,
            kind: JKind::Classical,
            perturbation: 0.0,
        }
    }

    pub fn mixture(n: usize, epsilon: f64) -> Self {
        Self {
            n,
            kind: JKind::Mixture { epsilon },
            perturbation: 0.0,
        }
    }

    pub fn fixed_point(n: usize, epsilon: f64) -> Self {
        Self {
            n,
            kind: JKind::FixedPoint { epsilon },
            perturbation: 0.0,
        }
    }

    pub fn truncated(n: usize, epsilon: f64, r: usize) -> Self {
        Self {
            n,
            kind: JKind::Truncated { epsilon, r },
            perturbation: 0.0,
        }
    }

    /// Pure internal states; `overlap` must be hermitian with unit diagonal.
    pub fn pure_overlap(overlap: ComplexMatrix) -> Result<Self, ModelsError> {
        let n = overlap.rows();
        if !overlap.is_square() {
            return Err(ModelsError::InvalidOverlap);
        }
        for k in 0..n {
            if (overlap[(k, k)] - 1.0).norm() > 1e-12 {
                return Err(ModelsError::InvalidOverlap);
            }
            for l in 0..k {
                if (overlap[(k, l)] - overlap[(l, k)].conj()).norm() > 1e-12 {
                    return Err(ModelsError::InvalidOverlap);
                }
            }
        }
        Ok(Self {
            n,
            kind: JKind::PureOverlap { overlap },
            perturbation: 0.0,
        })
    }

    /// Adds `delta` to every non-identity value. Only meant as a negative
    /// control for the verification suite.
    #[doc(hidden)]
    pub fn with_perturbation(mut self, delta: f64) -> Self {
        self.perturbation = delta;
        self
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &JKind {
        &self.kind
    }
}

fn theta(x: isize) -> f64 {
    if x >= 0 {
        1.0
    } else {
        0.0
    }
}

/// `J(sigma)` for a permutation of the function's degree.
pub fn j_evaluate(
    j: &DistinguishabilityFunction,
    sigma: &Permutation,
) -> Result<Complex64, ModelsError> {
    let n = j.n;
    if sigma.len() != n {
        return Err(ModelsError::DegreeMismatch {
            expected: n,
            found: sigma.len(),
        });
    }
    let c1 = sigma.fixed_point_count();
    let value = match &j.kind {
        JKind::Ideal => Complex64::new(1.0, 0.0),
        JKind::Classical => Complex64::new(theta(c1 as isize - n as isize), 0.0),
        JKind::Mixture { epsilon } => {
            // sum_n (1-eps)^n eps^(N-n) over interfering subsets K with sigma
            // acting inside K only
            let mut acc = 0.0;
            for size in 0..=n {
                let weight = (1.0 - epsilon).powi(size as i32) * epsilon.powi((n - size) as i32);
                let count = subsets_of_size(n, size)
                    .filter(|&k| sigma.moves_only_within(k))
                    .count();
                acc += weight * count as f64;
            }
            Complex64::new(acc, 0.0)
        }
        JKind::FixedPoint { epsilon } => Complex64::new((1.0 - epsilon).powi((n - c1) as i32), 0.0),
        JKind::Truncated { epsilon, r } => Complex64::new(
            (1.0 - epsilon).powi((n - c1) as i32) * theta(c1 as isize - n as isize + *r as isize),
            0.0,
        ),
        JKind::PureOverlap { overlap } => (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| {
            acc * overlap[(k, sigma.apply(k))]
        }),
    };
    if j.perturbation != 0.0 && !sigma.is_identity() {
        return Ok(value + j.perturbation);
    }
    Ok(value)
}

/// Lehmer-code rank of a permutation, `0..n!`.
fn perm_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// Precomputed `J` values indexed by Lehmer rank plus the permutation list.
struct JContext {
    perms: Vec<Permutation>,
    j_by_rank: Vec<Complex64>,
    // rank of sigma1 * sigma2^-1 for indices into `perms`, when small enough
    quotient: Option<Vec<u32>>,
}

impl JContext {
    fn new(j: &DistinguishabilityFunction) -> Result<Self, ModelsError> {
        let perms = all_permutations(j.n);
        let mut j_by_rank = vec![Complex64::new(0.0, 0.0); perms.len()];
        for p in &perms {
            j_by_rank[perm_rank(p.as_slice())] = j_evaluate(j, p)?;
        }
        let quotient = (j.n <= 6).then(|| {
            let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
            let mut q = Vec::with_capacity(perms.len() * perms.len());
            for s1 in &perms {
                for s2inv in &inverses {
                    q.push(perm_rank(s1.compose(s2inv).as_slice()) as u32);
                }
            }
            q
        });
        Ok(Self {
            perms,
            j_by_rank,
            quotient,
        })
    }

    /// `(1/m!) sum_{s1, s2} J(s1 s2^-1) prod_k U*_{s1(k), l_k} U_{s2(k), l_k}`.
    fn probability(
        &self,
        u: &ComplexMatrix,
        ports: &[usize],
        m_fact: f64,
    ) -> Result<f64, ModelsError> {
        let n = ports.len();
        let conj_prod: Vec<Complex64> = self
            .perms
            .iter()
            .map(|s| {
                (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| {
                    acc * u[(s.apply(k), ports[k])].conj()
                })
            })
            .collect();
        let prod: Vec<Complex64> = conj_prod.iter().map(|z| z.conj()).collect();
        let count = self.perms.len();
        let mut total = Complex64::new(0.0, 0.0);
        for (i1, a) in conj_prod.iter().enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for (i2, b) in prod.iter().enumerate() {
                let q = match &self.quotient {
                    Some(table) => table[i1 * count + i2] as usize,
                    None => perm_rank(self.perms[i1].compose(&self.perms[i2].inverse()).as_slice()),
                };
                row += self.j_by_rank[q] * b;
            }
            total += a * row;
        }
        let value = total / m_fact;
        if value.im.abs() > J_IMAGINARY_TOL {
            return Err(ModelsError::ImaginaryResidue(value.im));
        }
        Ok(value.re)
    }
}

/// Output probability of configuration `m` for bosons entering ports `0..N`
/// with internal state described by `j`.
pub fn probability_from_j(
    u: &ComplexMatrix,
    j: &DistinguishabilityFunction,
    m: &OutputConfiguration,
) -> Result<f64, ModelsError> {
    let n = j.n;
    guard_n(
        "probability from a distinguishability function",
        n,
        J_PROBABILITY_MAX_N,
    )?;
    if m.total() != n {
        return Err(ModelsError::DegreeMismatch {
            expected: n,
            found: m.total(),
        });
    }
    check_network(u, n, m.modes())?;
    let ctx = JContext::new(j)?;
    ctx.probability(u, &m.ports(), m.factorial_product())
}

/// [`probability_from_j`] for every configuration of `N` bosons in
/// `M = u.cols()` modes.
pub fn probability_from_j_table(
    u: &ComplexMatrix,
    j: &DistinguishabilityFunction,
) -> Result<ProbabilityTable, ModelsError> {
    let n = j.n;
    guard_n(
        "probability from a distinguishability function",
        n,
        J_PROBABILITY_MAX_N,
    )?;
    let m = u.cols();
    check_network(u, n, m)?;
    let idx = ConfigurationIndexer::new(n, m)?;
    let ctx = JContext::new(j)?;
    let mut entries = Vec::with_capacity(idx.count());
    for ports in idx.port_lists() {
        entries.push(ctx.probability(u, &ports, super::multiset_factorial(&ports))?);
    }
    ProbabilityTable::from_indexer(idx, entries, ModelTag::DistinguishabilityFunction)
}
