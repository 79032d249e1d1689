//! Exact rational arithmetic, deterministic sparse linear algebra and colored
//! partition enumeration.
//!
//! Every quantity in the crate is a [`Scalar`] (an arbitrary-precision
//! rational kept in lowest terms with a positive denominator).  The linear
//! algebra is deliberately boring: Gaussian elimination with pivots chosen by
//! lowest column index, so that kernel bases and membership certificates are
//! bit-for-bit reproducible across runs and thread counts.

mod linalg;
mod partitions;

pub use linalg::{kernel_basis, mat_vec, rank, span_membership, SpanBuilder, SparseMatrix, SparseVector};
pub use partitions::{colored_partitions, ColoredPartition};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.  `num_rational::BigRational` already maintains the
/// two invariants we rely on (lowest terms, positive denominator).
pub type Scalar = BigRational;

/// `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `n/d` as a scalar.  Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Floor of a scalar as a `BigInt`.
pub fn floor_int(x: &Scalar) -> BigInt {
    x.floor().to_integer()
}

/// True when `x` is an integer.
pub fn is_integer(x: &Scalar) -> bool {
    x.denom().is_one()
}

/// Generalized binomial coefficient `binom(r, j)` for rational `r` and
/// non-negative integer `j`:
///
/// ```text
/// binom(r, j) = r (r-1) ... (r-j+1) / j!
/// ```
///
/// This is the coefficient extraction used throughout the fractional-power
/// expansions, where `r` is typically `-2/p` or a mode-index difference.
pub fn rat_binom(r: &Scalar, j: u32) -> Scalar {
    let mut num = Scalar::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= r - int(i as i64);
        den *= BigInt::from(i as i64 + 1);
    }
    num / Scalar::from_integer(den)
}

/// Largest integer `k >= 0` with `k^2 <= x`, for non-negative rational `x`.
/// Used by the graded-basis ellipsoid enumeration to turn exact quadratic
/// bounds into integer scan ranges.
pub fn sqrt_floor(x: &Scalar) -> BigInt {
    assert!(!x.is_negative(), "sqrt_floor of a negative rational");
    if x.is_zero() {
        return BigInt::zero();
    }
    // Start from the integer sqrt of floor(x) and adjust; floor(sqrt(x)) can
    // exceed isqrt(floor(x)) by at most nothing and undershoot by at most one.
    let mut k = floor_int(x).sqrt();
    while &Scalar::from_integer((&k + 1) * (&k + 1)) <= x {
        k += 1;
    }
    while Scalar::from_integer(&k * &k) > *x && k.is_positive() {
        k -= 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_binom_small_cases() {
        // binom(r, 0) = 1 for any r.
        assert_eq!(rat_binom(&rat(7, 3), 0), int(1));
        assert_eq!(rat_binom(&int(-5), 0), int(1));
        // binom(-1, 1) = -1.
        assert_eq!(rat_binom(&int(-1), 1), int(-1));
        // binom(-2/3, 2) = (-2/3)(-5/3)/2 = 5/9.
        assert_eq!(rat_binom(&rat(-2, 3), 2), rat(5, 9));
        // Integer specialisation: binom(5, 2) = 10, binom(1, 2) = 0.
        assert_eq!(rat_binom(&int(5), 2), int(10));
        assert_eq!(rat_binom(&int(1), 2), int(0));
        // binom(-n, i) = (-1)^i binom(n+i-1, i), used by the iterate formula.
        assert_eq!(rat_binom(&int(-2), 3), int(-4));
    }

    #[test]
    fn rat_binom_pascal_rule() {
        // binom(r, j) = binom(r-1, j) + binom(r-1, j-1) over a grid of
        // rational r values.
        for num in -6i64..=6 {
            for den in 1i64..=4 {
                let r = rat(num, den);
                let rm1 = &r - int(1);
                for j in 1u32..=5 {
                    assert_eq!(
                        rat_binom(&r, j),
                        rat_binom(&rm1, j) + rat_binom(&rm1, j - 1),
                        "pascal failed at r={num}/{den}, j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn sqrt_floor_matches_squares() {
        assert_eq!(sqrt_floor(&int(0)), BigInt::from(0));
        assert_eq!(sqrt_floor(&int(1)), BigInt::from(1));
        assert_eq!(sqrt_floor(&rat(35, 9)), BigInt::from(1));
        assert_eq!(sqrt_floor(&int(36)), BigInt::from(6));
        assert_eq!(sqrt_floor(&rat(143, 4)), BigInt::from(5));
        for n in 0i64..200 {
            let k = sqrt_floor(&int(n));
            assert!(&k * &k <= BigInt::from(n));
            assert!((&k + 1) * (&k + 1) > BigInt::from(n));
        }
    }
}
