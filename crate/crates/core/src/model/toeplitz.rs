//! Durbin-Levinson innovations recursion on stationary autocovariances.
//!
//! For a zero-mean stationary Gaussian series with autocovariance
//! gamma(0..N-1), the recursion yields the one-step predictor coefficients
//! and innovation variances in O(N^2) time and O(N) memory, never forming
//! the Toeplitz matrix. The same coefficient sweep serves two purposes:
//! run against observed data it evaluates the exact log-likelihood, run
//! forward on i.i.d. normals it generates an exact sample of the series.

use crate::error::{Error, Result};
use crate::num::{real, Real};

/// Predictor state of order `m`: `phi[0..m]` are the coefficients of
/// x[m-1], ..., x[0] in the conditional mean of x[m], and `v` is the
/// conditional variance.
struct Levinson<'a, T> {
    gamma: &'a [T],
    phi: Vec<T>,
    prev: Vec<T>,
    v: T,
    m: usize,
}

impl<'a, T: Real> Levinson<'a, T> {
    fn new(gamma: &'a [T]) -> Result<Self> {
        let v = gamma
            .first()
            .copied()
            .ok_or(Error::EmptyInput("autocovariance sequence"))?;
        if !(v.is_finite() && v > T::zero()) {
            return Err(Error::NumericalDomain(format!(
                "autocovariance at lag 0 must be positive, got {v}"
            )));
        }
        for (k, g) in gamma.iter().enumerate() {
            if !g.is_finite() {
                return Err(Error::NumericalDomain(format!(
                    "non-finite autocovariance at lag {k}"
                )));
            }
        }
        Ok(Self {
            gamma,
            phi: vec![T::zero(); gamma.len()],
            prev: vec![T::zero(); gamma.len()],
            v,
            m: 0,
        })
    }

    /// Conditional mean of x[m] given x[..m].
    #[inline]
    fn predict(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for (p, xv) in self.phi[..self.m].iter().zip(x[..self.m].iter().rev()) {
            acc += *p * *xv;
        }
        acc
    }

    /// Advances the predictor by one order. Errors when the implied
    /// innovation variance stops being positive, i.e. the autocovariance
    /// is not positive definite to working precision.
    fn advance(&mut self) -> Result<()> {
        let m = self.m;
        core::mem::swap(&mut self.phi, &mut self.prev);
        let mut acc = self.gamma[m + 1];
        for j in 0..m {
            acc -= self.prev[j] * self.gamma[m - j];
        }
        let k = acc / self.v;
        for j in 0..m {
            self.phi[j] = self.prev[j] - k * self.prev[m - 1 - j];
        }
        self.phi[m] = k;
        self.v *= T::one() - k * k;
        self.m = m + 1;
        if !(self.v.is_finite() && self.v > T::zero()) {
            return Err(Error::NumericalDomain(format!(
                "innovation variance {} at order {} is not positive",
                self.v,
                self.m
            )));
        }
        Ok(())
    }
}

/// Sum over `series` of ln N(series_d; 0, Toeplitz(gamma)).
///
/// All series share one coefficient sweep, so d series cost barely more
/// than one.
pub(crate) fn toeplitz_gaussian_loglik_multi<T: Real>(
    gamma: &[T],
    series: &[&[T]],
) -> Result<T> {
    let n = gamma.len();
    if series.is_empty() {
        return Err(Error::EmptyInput("no series to evaluate"));
    }
    for s in series {
        if s.len() != n {
            return Err(Error::LengthMismatch(format!(
                "series of length {} against autocovariance of length {n}",
                s.len()
            )));
        }
    }
    let mut lev = Levinson::new(gamma)?;
    let half = real::<T>(0.5);
    let mut ll = T::zero();
    for m in 0..n {
        let v = lev.v;
        let ln_v = v.ln();
        for s in series {
            let r = s[m] - lev.predict(s);
            ll -= half * (T::LN_TWO_PI + ln_v) + half * r * r / v;
        }
        if m + 1 < n {
            lev.advance()?;
        }
    }
    if !ll.is_finite() {
        return Err(Error::NumericalDomain(
            "stationary Gaussian log-likelihood is not finite".into(),
        ));
    }
    Ok(ll)
}

/// Maps i.i.d. standard normals `z` to an exact draw of the stationary
/// series with autocovariance `gamma` (gamma.len() == z.len()).
pub(crate) fn toeplitz_gaussian_sample<T: Real>(gamma: &[T], z: &[T]) -> Result<Vec<T>> {
    let n = gamma.len();
    if z.len() != n {
        return Err(Error::LengthMismatch(format!(
            "{} normals against autocovariance of length {n}",
            z.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut lev = Levinson::new(gamma)?;
    let mut x = vec![T::zero(); n];
    for m in 0..n {
        x[m] = lev.predict(&x) + lev.v.sqrt() * z[m];
        if m + 1 < n {
            lev.advance()?;
        }
    }
    Ok(x)
}
