//! Fractional Brownian motion: zero-mean Gaussian increments with the
//! stationary autocovariance
//!   gamma(0) = sigma^2 + 2 sigma_mn^2,
//!   gamma(+-1) = sigma^2 (2^(a-1) - 1) - sigma_mn^2,
//!   gamma(n) = sigma^2/2 (|n+1|^a + |n-1|^a - 2|n|^a), |n| >= 2,
//! where sigma is the per-step deviation (sigma^2 = 2 K dt^a) and the
//! sigma_mn terms come from independent measurement noise on positions.
//! The exact likelihood runs through the Durbin-Levinson innovations
//! recursion; the dense route exists only as an oracle.

use serde::{Deserialize, Serialize};

use super::gaussian::CovarianceMatrix;
use super::toeplitz::toeplitz_gaussian_loglik_multi;
use crate::error::{Error, Result};
use crate::num::{real, Real};

/// Parameters of a noisy fractional-Brownian-motion track.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FbmParams<T> {
    alpha: T,
    sigma: T,
    dt: T,
    sigma_mn: T,
}

impl<T: Real> FbmParams<T> {
    /// Validates 0 < alpha < 2, sigma > 0, dt > 0, sigma_mn >= 0, all finite.
    pub fn new(alpha: T, sigma: T, dt: T, sigma_mn: T) -> Result<Self> {
        for (name, v) in [
            ("alpha", alpha),
            ("sigma", sigma),
            ("dt", dt),
            ("sigma_mn", sigma_mn),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if alpha <= T::zero() || alpha >= real(2.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 2), got {alpha}"
            )));
        }
        if sigma <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        if dt <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if sigma_mn < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "sigma_mn must be non-negative, got {sigma_mn}"
            )));
        }
        Ok(Self {
            alpha,
            sigma,
            dt,
            sigma_mn,
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn sigma_mn(&self) -> T {
        self.sigma_mn
    }

    /// Generalized diffusion coefficient, K = sigma^2 / (2 dt^a).
    pub fn k_alpha(&self) -> T {
        self.sigma * self.sigma / (real::<T>(2.0) * self.dt.powf(self.alpha))
    }
}

/// Autocovariance of the noisy increment series at a signed lag.
pub fn fbm_autocov<T: Real>(p: &FbmParams<T>, lag: i64) -> T {
    let s2 = p.sigma * p.sigma;
    let smn2 = p.sigma_mn * p.sigma_mn;
    let two = real::<T>(2.0);
    match lag.unsigned_abs() {
        0 => s2 + two * smn2,
        1 => {
            // 2^(a-1) - 1 through expm1 so alpha = 1 gives exactly 0.
            let half_pow = ((p.alpha - T::one()) * real::<T>(core::f64::consts::LN_2)).exp_m1();
            s2 * half_pow - smn2
        }
        n => {
            let nf = real::<T>(n as f64);
            let half = real::<T>(0.5);
            s2 * half
                * ((nf + T::one()).powf(p.alpha) + (nf - T::one()).powf(p.alpha)
                    - two * nf.powf(p.alpha))
        }
    }
}

/// First n autocovariances gamma(0..n-1).
pub fn fbm_autocov_seq<T: Real>(p: &FbmParams<T>, n: usize) -> Vec<T> {
    (0..n as i64).map(|k| fbm_autocov(p, k)).collect()
}

/// Exact log-likelihood of one increment series under noisy FBM,
/// O(N^2) time and O(N) memory.
pub fn fbm_loglik_1d<T: Real>(dx: &[T], p: &FbmParams<T>) -> Result<T> {
    fbm_loglik_multi(&[dx], p)
}

/// Joint log-likelihood of independent coordinate series sharing the same
/// parameters; the innovations coefficients are computed once for all
/// coordinates.
pub fn fbm_loglik_multi<T: Real>(series: &[&[T]], p: &FbmParams<T>) -> Result<T> {
    let n = match series.first() {
        None => return Err(Error::EmptyInput("no series to evaluate")),
        Some(s) => s.len(),
    };
    if n == 0 {
        return Err(Error::EmptyInput("increment series of length 0"));
    }
    let gamma = fbm_autocov_seq(p, n);
    toeplitz_gaussian_loglik_multi(&gamma, series)
}

/// Dense Toeplitz covariance of the increments; oracle route only.
pub fn fbm_increment_covariance<T: Real>(p: &FbmParams<T>, n: usize) -> Result<CovarianceMatrix<T>> {
    if n == 0 {
        return Err(Error::EmptyInput("covariance of 0 increments"));
    }
    let gamma = fbm_autocov_seq(p, n);
    CovarianceMatrix::from_fn(n, |i, j| gamma[i - j])
}
