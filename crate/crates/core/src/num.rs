//! Scalar abstraction for the numerical kernels.
//!
//! The model and simulation code is generic over [`Real`] so the same
//! kernels run in `f32` or `f64`. The statistical pipeline (priors, nested
//! sampling, inference) is pinned to `f64`; the crate root exports `f64`
//! aliases of the generic types for it.

use core::fmt::{Debug, Display};
use core::iter::Sum;
use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar accepted by the model and simulation kernels.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + serde::Serialize
    + serde::de::DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// ln(2 pi), the constant in Gaussian log-density normalizations.
    const LN_TWO_PI: Self;
}

impl Real for f32 {
    const LN_TWO_PI: Self = 1.837_877_1;
}

impl Real for f64 {
    const LN_TWO_PI: Self = 1.837_877_066_409_345_3;
}

/// Converts an `f64` constant into `T`.
///
/// Panics only if `T` cannot represent ordinary finite `f64` values, which
/// cannot happen for the provided `Real` impls.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant must be representable")
}

/// ln(exp(a) + exp(b)) without overflow; `-inf` inputs behave as exp = 0.
#[inline]
pub fn logaddexp<T: Real>(a: T, b: T) -> T {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == T::neg_infinity() {
        return T::neg_infinity();
    }
    if lo == T::neg_infinity() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_two_pi_matches_definition() {
        assert!((f64::LN_TWO_PI - (2.0 * std::f64::consts::PI).ln()).abs() < 1e-15);
        assert!((f64::from(f32::LN_TWO_PI) - f64::LN_TWO_PI).abs() < 1e-7);
    }

    #[test]
    fn logaddexp_basic() {
        let got: f64 = logaddexp(0.0, 0.0);
        assert!((got - 2.0f64.ln()).abs() < 1e-15);
        // Strongly separated terms: the small one is absorbed exactly.
        assert_eq!(logaddexp(0.0, -1e9), 0.0);
        assert_eq!(logaddexp(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert_eq!(logaddexp(f64::NEG_INFINITY, 1.5), 1.5);
        // Symmetry.
        assert_eq!(logaddexp(1.0, 2.5), logaddexp(2.5, 1.0));
    }

    #[test]
    fn logaddexp_no_overflow() {
        let got = logaddexp(800.0_f64, 800.0);
        assert!((got - (800.0 + 2.0f64.ln())).abs() < 1e-12);
    }
}
