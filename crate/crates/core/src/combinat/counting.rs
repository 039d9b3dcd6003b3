//! Exact integer counts: factorials, binomials, derangements, chi.

use super::{all_permutations, CombinatError};

/// Largest argument for which `n!` fits in a `u128` with room to spare for
/// the sums below.
pub const MAX_EXACT_N: usize = 20;

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of derangements of `k` objects, `k! sum_{i<=k} (-1)^i / i!`,
/// evaluated with the recurrence `D(k) = (k - 1)(D(k-1) + D(k-2))`.
fn derangements(k: usize) -> u128 {
    let (mut prev, mut cur) = (1u128, 0u128);
    if k == 0 {
        return prev;
    }
    for j in 2..=k {
        let next = (j as u128 - 1) * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Number of permutations of `n` elements with exactly `s` fixed points,
/// `(n!/s!) sum_{i=0}^{n-s} (-1)^i / i!`.
pub fn derangement_count(n: usize, s: usize) -> Result<u128, CombinatError> {
    if s > n {
        return Err(CombinatError::FixedPointsExceedDegree { n, s });
    }
    if n > MAX_EXACT_N {
        return Err(CombinatError::Overflow {
            n,
            limit: MAX_EXACT_N,
        });
    }
    // (n!/s!) sum (-1)^i/i! = C(n, s) * D(n - s)
    Ok(binomial(n, s) * derangements(n - s))
}

/// `chi(n) = sum_{tau in S_n} 2^{C_1(tau)} = n! sum_{k=0}^{n} 1/k!`, closed form.
pub fn chi(n: usize) -> Result<u128, CombinatError> {
    if n > MAX_EXACT_N {
        return Err(CombinatError::Overflow {
            n,
            limit: MAX_EXACT_N,
        });
    }
    // n!/k! = (k+1)(k+2)...n
    Ok((0..=n)
        .map(|k| (k + 1..=n).map(|j| j as u128).product::<u128>())
        .sum())
}

/// `chi(n)` by enumerating `S_n`; only feasible for small `n`.
pub fn chi_by_enumeration(n: usize) -> u128 {
    all_permutations(n)
        .iter()
        .map(|p| 1u128 << p.fixed_point_count())
        .sum()
}
