//! Coefficient fields.
//!
//! Every chain, cochain and matrix in this crate is generic over a [`Scalar`].
//! The coefficients that actually occur in the algorithms are `±1`, `1/j` and
//! `1/k` for small integers, so exact rationals are the default instantiation
//! (see [`crate::Rat`]). `f64` is supported for quick experiments; rank and
//! vanishing tests then use an absolute tolerance.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{NumAssign, Signed};

/// A field of coefficients.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + NumAssign + Neg<Output = Self> + Send + Sync + 'static
{
    /// True when arithmetic is exact and zero tests are reliable.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// `1 / k`.
    fn recip_i64(k: i64) -> Self {
        Self::one() / Self::from_i64(k)
    }

    /// Whether the value should be treated as zero by elimination and
    /// support pruning.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Magnitude used for pivot selection; smaller is preferred.
    fn pivot_cost(&self) -> u64;

    fn abs_value(&self) -> Self;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn pivot_cost(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

/// Machine-word rationals. Faster than [`BigRational`] but panics on overflow,
/// so only suitable for small degrees.
impl Scalar for Rational64 {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }

    fn pivot_cost(&self) -> u64 {
        let bits = |v: i64| 64 - v.unsigned_abs().leading_zeros() as u64;
        bits(*self.numer()) + bits(*self.denom())
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

/// Absolute tolerance for `f64` zero tests.
pub const F64_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() < F64_TOLERANCE
    }

    // Prefer large pivots for stability: invert the ordering.
    fn pivot_cost(&self) -> u64 {
        let mag = self.abs();
        if mag >= 1.0 {
            0
        } else {
            (1.0 / mag).log2().ceil().max(0.0) as u64
        }
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }
}

/// `(-1)^k` as a scalar.
pub fn sign<F: Scalar>(k: usize) -> F {
    if k.is_multiple_of(2) {
        F::one()
    } else {
        -F::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn recip_is_exact_for_rationals() {
        let third = BigRational::recip_i64(3);
        assert_eq!(third.clone() * BigRational::from_i64(3), BigRational::one());
        assert_eq!(Rational64::recip_i64(4), Rational64::new(1, 4));
    }

    #[test]
    fn sign_alternates() {
        assert_eq!(sign::<f64>(0), 1.0);
        assert_eq!(sign::<f64>(3), -1.0);
        assert_eq!(sign::<BigRational>(2), BigRational::one());
    }

    #[test]
    fn f64_tolerance_applies() {
        assert!(1e-12f64.is_negligible());
        assert!(!1e-3f64.is_negligible());
        assert!(!BigRational::new(1.into(), 1_000_000_000_000i64.into()).is_negligible());
    }
}
