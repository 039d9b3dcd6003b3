//! Matrix permanents.
//!
//! Two algorithms are provided: the Ryser inclusion-exclusion formula with
//! Gray-code subset iteration, `O(2^n n)`, and the defining sum over all
//! permutations, `O(n! n)`, which is kept as an independent oracle.

use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{ComplexMatrix, LinalgError};

/// Largest order accepted by [`PermanentMethod::Ryser`].
pub const RYSER_MAX_ORDER: usize = 24;
/// Largest order accepted by [`PermanentMethod::Naive`].
pub const NAIVE_MAX_ORDER: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermanentMethod {
    Naive,
    Ryser,
}

/// Scalars the permanent kernels can accumulate in.
pub trait PermScalar:
    Copy
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
{
}

impl PermScalar for f64 {}
impl PermScalar for Complex64 {}

/// Permanent of a square complex matrix.
pub fn permanent(a: &ComplexMatrix, method: PermanentMethod) -> Result<Complex64, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let limit = match method {
        PermanentMethod::Naive => NAIVE_MAX_ORDER,
        PermanentMethod::Ryser => RYSER_MAX_ORDER,
    };
    if n > limit {
        return Err(LinalgError::OrderTooLarge {
            order: n,
            limit,
            method,
        });
    }
    Ok(match method {
        PermanentMethod::Naive => permanent_naive(a.as_slice(), n),
        PermanentMethod::Ryser => permanent_ryser(a.as_slice(), n),
    })
}

/// Permanent of an `n x n` row-major slice, choosing the cheaper kernel for
/// the order. No range checks beyond `debug_assert`.
#[inline]
pub fn permanent_of<T: PermScalar>(a: &[T], n: usize) -> T {
    debug_assert_eq!(a.len(), n * n);
    match n {
        0 => T::one(),
        1 => a[0],
        2 => a[0] * a[3] + a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] + a[5] * a[7])
                + a[1] * (a[3] * a[8] + a[5] * a[6])
                + a[2] * (a[3] * a[7] + a[4] * a[6])
        }
        _ => permanent_ryser(a, n),
    }
}

/// Ryser's formula `per A = (-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} a_ij`,
/// visiting column subsets in Gray-code order so that each step adds or
/// removes a single column from the running row sums.
pub fn permanent_ryser<T: PermScalar>(a: &[T], n: usize) -> T {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return T::one();
    }
    let mut row_sums = vec![T::zero(); n];
    let mut total = T::zero();
    let mut prev_gray = 0u64;
    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let flipped = gray ^ prev_gray;
        let col = flipped.trailing_zeros() as usize;
        if gray & flipped != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[i * n + col];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[i * n + col];
            }
        }
        prev_gray = gray;
        let prod = row_sums[1..].iter().fold(row_sums[0], |acc, &s| acc * s);
        if (n - gray.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

/// The defining sum `sum_sigma prod_i a_{i, sigma(i)}` over all permutations,
/// generated with Heap's algorithm.
pub fn permanent_naive<T: PermScalar>(a: &[T], n: usize) -> T {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return T::one();
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let term = |p: &[usize]| (1..n).fold(a[p[0]], |acc, i| acc * a[i * n + p[i]]);
    let mut total = term(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += term(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_has_unit_permanent() {
        let id = ComplexMatrix::identity(3);
        for method in [PermanentMethod::Naive, PermanentMethod::Ryser] {
            assert_eq!(permanent(&id, method).unwrap(), c(1.0));
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        for method in [PermanentMethod::Naive, PermanentMethod::Ryser] {
            assert_eq!(permanent(&a, method).unwrap(), c(10.0));
        }
    }

    #[test]
    fn all_ones_four_by_four_is_24() {
        let a = ComplexMatrix::from_real_rows(&vec![vec![1.0; 4]; 4]).unwrap();
        assert_eq!(permanent(&a, PermanentMethod::Naive).unwrap(), c(24.0));
        assert!((permanent(&a, PermanentMethod::Ryser).unwrap() - c(24.0)).norm() < 1e-12);
    }

    #[test]
    fn unrolled_small_orders_match_ryser() {
        let vals: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).sin()).collect();
        for n in 0..=3 {
            let a = &vals[..n * n];
            assert!((permanent_of(a, n) - permanent_ryser(a, n)).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_square_and_oversized() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            permanent(&a, PermanentMethod::Ryser),
            Err(LinalgError::NotSquare { .. })
        ));
        let big = ComplexMatrix::identity(10);
        assert!(matches!(
            permanent(&big, PermanentMethod::Naive),
            Err(LinalgError::OrderTooLarge { order: 10, .. })
        ));
        assert!(permanent(&big, PermanentMethod::Ryser).is_ok());
    }

    #[test]
    fn empty_matrix_has_unit_permanent() {
        assert_eq!(
            permanent(&ComplexMatrix::zeros(0, 0), PermanentMethod::Ryser).unwrap(),
            c(1.0)
        );
    }
}
