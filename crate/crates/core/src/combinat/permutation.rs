use std::fmt;

use super::CombinatError;

/// A permutation of `{0, ..., n-1}` stored as its image list, `sigma(i) = map[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn new(map: Vec<usize>) -> Result<Self, CombinatError> {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            if x >= map.len() || std::mem::replace(&mut seen[x], true) {
                return Err(CombinatError::NotAPermutation(map));
            }
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different degree"
        );
        Self {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    /// `C_1(sigma)`, the number of fixed points.
    pub fn fixed_point_count(&self) -> usize {
        self.map
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i == j)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Whether every point outside `set` (a bitmask) is fixed.
    pub fn moves_only_within(&self, set: u64) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(i, &j)| i == j || set & (1 << i) != 0)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.map)
    }
}

/// `C_1(sigma)` for a permutation.
pub fn fixed_point_count(sigma: &Permutation) -> usize {
    sigma.fixed_point_count()
}

/// All `n!` permutations of `{0..n-1}` in Heap's-algorithm order, starting
/// from the identity.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut map: Vec<usize> = (0..n).collect();
    out.push(Permutation { map: map.clone() });
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                map.swap(0, i);
            } else {
                map.swap(c[i], i);
            }
            out.push(Permutation { map: map.clone() });
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}
