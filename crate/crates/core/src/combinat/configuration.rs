//! Output configurations `m = (m_1, ..., m_M)` and their enumeration.
//!
//! A configuration is equivalently a sorted multiset of output ports
//! `l_1 <= ... <= l_N`. Configurations are always handled in the canonical
//! occupation form so that the same outcome is never counted twice.
//!
//! Enumeration order is lexicographic on the sorted port lists, which is the
//! same as descending lexicographic order on occupation vectors:
//! `(2,0), (1,1), (0,2)`. [`ConfigurationIndexer`] maps a configuration to its
//! position in that order in `O(N)` so probability tables can be dense.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::counting::factorial_f64;
use super::CombinatError;

/// Largest configuration space any enumeration will produce.
pub const MAX_CONFIGURATIONS: u128 = 10_000_000;

/// Occupation numbers of `M` output ports.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutputConfiguration {
    occupations: Vec<u8>,
}

impl OutputConfiguration {
    pub fn new(occupations: Vec<u8>) -> Self {
        Self { occupations }
    }

    pub fn from_slice(occupations: &[usize]) -> Result<Self, CombinatError> {
        let occ = occupations
            .iter()
            .map(|&x| u8::try_from(x).map_err(|_| CombinatError::OccupationTooLarge(x)))
            .collect::<Result<_, _>>()?;
        Ok(Self { occupations: occ })
    }

    /// Configuration of a list of output ports (any order, repeats allowed).
    pub fn from_ports(ports: &[usize], modes: usize) -> Result<Self, CombinatError> {
        let mut occ = vec![0u8; modes];
        for &p in ports {
            if p >= modes {
                return Err(CombinatError::PortOutOfRange { port: p, modes });
            }
            occ[p] = occ[p]
                .checked_add(1)
                .ok_or(CombinatError::OccupationTooLarge(256))?;
        }
        Ok(Self { occupations: occ })
    }

    pub fn empty(modes: usize) -> Self {
        Self {
            occupations: vec![0; modes],
        }
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    pub fn occupations(&self) -> &[u8] {
        &self.occupations
    }

    /// `|m|`, the number of bosons.
    pub fn total(&self) -> usize {
        self.occupations.iter().map(|&x| x as usize).sum()
    }

    /// Sorted list of occupied ports with repetition.
    pub fn ports(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.total());
        for (p, &k) in self.occupations.iter().enumerate() {
            out.extend(std::iter::repeat_n(p, k as usize));
        }
        out
    }

    /// `m! = m_1! ... m_M!`.
    pub fn factorial_product(&self) -> f64 {
        self.occupations
            .iter()
            .map(|&k| factorial_f64(k as usize))
            .product()
    }

    pub fn is_collision_free(&self) -> bool {
        self.occupations.iter().all(|&k| k <= 1)
    }

    /// Componentwise `self - other`, if `other <= self` in every port.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.modes() != other.modes() {
            return None;
        }
        let occ = self
            .occupations
            .iter()
            .zip(&other.occupations)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<u8>>>()?;
        Some(Self { occupations: occ })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modes(), other.modes());
        Self {
            occupations: self
                .occupations
                .iter()
                .zip(&other.occupations)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl fmt::Debug for OutputConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OutputConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.occupations.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Dense index of all configurations with `n` bosons in `m` modes.
///
/// A sorted port list `l_0 <= ... <= l_{n-1}` maps to the strict subset
/// `c_i = l_i + i` of `{0, ..., m+n-2}`. Lexicographic order on `c` is the
/// reverse of colexicographic order on the complements `m+n-2-c_i`, which
/// gives the closed-form rank below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationIndexer {
    n: usize,
    m: usize,
    count: usize,
    // binom[a][b] = C(a, b) for a < m + n, b <= n
    binom: Vec<Vec<u64>>,
}

impl ConfigurationIndexer {
    pub fn new(n: usize, m: usize) -> Result<Self, CombinatError> {
        if m == 0 {
            return Err(CombinatError::NoModes);
        }
        let count = configuration_count(n, m);
        if count > MAX_CONFIGURATIONS {
            return Err(CombinatError::TooManyConfigurations { n, m, count });
        }
        let universe = m + n - 1;
        let mut binom = vec![vec![0u64; n + 1]; universe + 1];
        for a in 0..=universe {
            binom[a][0] = 1;
            for b in 1..=n.min(a) {
                binom[a][b] = binom[a - 1][b - 1] + if b < a { binom[a - 1][b] } else { 0 };
            }
        }
        Ok(Self {
            n,
            m,
            count: count as usize,
            binom,
        })
    }

    pub fn bosons(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    /// Number of configurations, `C(m + n - 1, n)`.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Position of a sorted port list in enumeration order.
    #[inline]
    pub fn rank_ports(&self, ports: &[usize]) -> usize {
        debug_assert_eq!(ports.len(), self.n);
        debug_assert!(ports.windows(2).all(|w| w[0] <= w[1]));
        if self.n == 0 {
            return 0;
        }
        let top = self.m + self.n - 2;
        let mut acc = 0u64;
        for (i, &l) in ports.iter().enumerate() {
            let c = l + i;
            acc += self.binom[top - c][self.n - i];
        }
        self.count - 1 - acc as usize
    }

    pub fn rank(&self, cfg: &OutputConfiguration) -> Option<usize> {
        if cfg.modes() != self.m || cfg.total() != self.n {
            return None;
        }
        Some(self.rank_ports(&cfg.ports()))
    }

    /// Sorted port lists in enumeration order.
    pub fn port_lists(&self) -> PortLists {
        PortLists {
            modes: self.m,
            current: Some(vec![0; self.n]),
        }
    }

    pub fn configurations(&self) -> impl Iterator<Item = OutputConfiguration> + '_ {
        let m = self.m;
        self.port_lists()
            .map(move |p| OutputConfiguration::from_ports(&p, m).expect("ports in range"))
    }
}

/// `C(m + n - 1, n)`, saturating at `u128::MAX`.
pub fn configuration_count(n: usize, m: usize) -> u128 {
    if m == 0 {
        return u128::from(n == 0);
    }
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = match acc.checked_mul((m + i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Iterator over sorted port multisets of fixed size, in lexicographic order.
pub struct PortLists {
    modes: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for PortLists {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        if let Some(i) = next.iter().rposition(|&l| l + 1 < self.modes) {
            let v = next[i] + 1;
            for x in &mut next[i..] {
                *x = v;
            }
            self.current = Some(next);
        }
        Some(cur)
    }
}

/// Every configuration with `n` bosons in `m` modes, exactly once, in
/// lexicographic order.
pub fn enumerate_configurations(
    n: usize,
    m: usize,
) -> Result<impl Iterator<Item = OutputConfiguration>, CombinatError> {
    let idx = ConfigurationIndexer::new(n, m)?;
    Ok(idx
        .port_lists()
        .map(move |p| OutputConfiguration::from_ports(&p, m).expect("ports in range")))
}

/// Collision-free port lists `l_0 < ... < l_{n-1}` in lexicographic order.
pub fn collision_free_port_lists(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current = if n <= m {
        Some((0..n).collect::<Vec<_>>())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let cur = current.take()?;
        let mut next = cur.clone();
        let k = next.len();
        if let Some(i) = (0..k).rev().find(|&i| next[i] < m - k + i) {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            current = Some(next);
        }
        Some(cur)
    })
}

/// All pairs `(s, r)` with `s ⊂ m`, `|s| = n` and `r = m - s`.
pub fn enumerate_subconfigurations(
    m: &OutputConfiguration,
    n: usize,
) -> Result<Vec<(OutputConfiguration, OutputConfiguration)>, CombinatError> {
    let total = m.total();
    if n > total {
        return Err(CombinatError::SubsetTooLarge { n, total });
    }
    let modes = m.modes();
    let mut out = Vec::new();
    visit_subconfigurations(&m.ports(), n, &mut |s, r| {
        out.push((
            OutputConfiguration::from_ports(s, modes).expect("ports in range"),
            OutputConfiguration::from_ports(r, modes).expect("ports in range"),
        ));
    });
    Ok(out)
}

/// Calls `f(s_ports, r_ports)` for every sub-multiset `s` of size `n` of the
/// sorted port list `ports`, with `r` the complementary multiset. Both lists
/// are passed sorted. No allocation per visit.
pub fn visit_subconfigurations(ports: &[usize], n: usize, f: &mut impl FnMut(&[usize], &[usize])) {
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &p in ports {
        match groups.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => groups.push((p, 1)),
        }
    }
    if n > ports.len() {
        return;
    }
    // suffix[g] = number of bosons in groups g..
    let mut suffix = vec![0usize; groups.len() + 1];
    for g in (0..groups.len()).rev() {
        suffix[g] = suffix[g + 1] + groups[g].1;
    }
    let mut s = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(ports.len() - n);
    recurse(&groups, &suffix, 0, n, &mut s, &mut r, f);

    fn recurse(
        groups: &[(usize, usize)],
        suffix: &[usize],
        g: usize,
        need: usize,
        s: &mut Vec<usize>,
        r: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize], &[usize]),
    ) {
        if g == groups.len() {
            if need == 0 {
                f(s, r);
            }
            return;
        }
        let (port, mult) = groups[g];
        let lo = need.saturating_sub(suffix[g + 1]);
        let hi = mult.min(need);
        for take in lo..=hi {
            let (sl, rl) = (s.len(), r.len());
            s.extend(std::iter::repeat_n(port, take));
            r.extend(std::iter::repeat_n(port, mult - take));
            recurse(groups, suffix, g + 1, need - take, s, r, f);
            s.truncate(sl);
            r.truncate(rl);
        }
    }
}

/// Bitmasks of all `k`-element subsets of `{0..n-1}`, increasing.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n < 64);
    let limit = 1u64 << n;
    let mut cur = if k > n { None } else { Some((1u64 << k) - 1) };
    std::iter::from_fn(move || {
        let v = cur?;
        cur = if v == 0 {
            None
        } else {
            // Gosper's hack
            let c = v & v.wrapping_neg();
            let r = v + c;
            let next = (((r ^ v) >> 2) / c) | r;
            (next < limit).then_some(next)
        };
        Some(v)
    })
}

/// Elements of a bitmask in increasing order.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}
