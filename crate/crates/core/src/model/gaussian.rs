//! Dense zero-mean Gaussian log-density: the oracle route.
//!
//! This path builds the full covariance and factorizes it, deliberately
//! sharing no code with the O(N) / O(N^2) recursions it is used to check.

use crate::error::{Error, Result};
use crate::num::{real, Real};

/// Dense symmetric matrix in row-major storage. `set` writes both mirror
/// entries, so instances stay symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("covariance matrix of size 0"));
        }
        Ok(Self {
            n,
            data: vec![T::zero(); n * n],
        })
    }

    /// Builds the matrix from entries `f(i, j)` for `j <= i`, mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NumericalDomain(format!(
                        "non-finite covariance entry at ({i}, {j})"
                    )));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Lower Cholesky factor (row-major, dense). Fails on a non-positive
    /// pivot, which is the positive-definiteness check.
    pub fn cholesky(&self) -> Result<Vec<T>> {
        let n = self.n;
        let mut l = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if !(s.is_finite() && s > T::zero()) {
                        return Err(Error::NotPositiveDefinite {
                            index: i,
                            pivot: s.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(l)
    }
}

/// ln N(dx; 0, cov) through a dense Cholesky factorization.
pub fn dense_gaussian_loglik<T: Real>(dx: &[T], cov: &CovarianceMatrix<T>) -> Result<T> {
    let n = cov.n();
    if dx.is_empty() {
        return Err(Error::EmptyInput("increment vector"));
    }
    if dx.len() != n {
        return Err(Error::LengthMismatch(format!(
            "increment vector of length {} against covariance of size {n}",
            dx.len()
        )));
    }
    let l = cov.cholesky()?;
    // Forward solve L y = dx; the log-density follows from the factor.
    let mut y = vec![T::zero(); n];
    let mut log_det_half = T::zero();
    let mut quad = T::zero();
    for i in 0..n {
        let mut s = dx[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        let d = l[i * n + i];
        y[i] = s / d;
        log_det_half += d.ln();
        quad += y[i] * y[i];
    }
    let half = real::<T>(0.5);
    let ll = -real::<T>(n as f64) * half * T::LN_TWO_PI - log_det_half - half * quad;
    if !ll.is_finite() {
        return Err(Error::NumericalDomain(
            "dense Gaussian log-likelihood is not finite".into(),
        ));
    }
    Ok(ll)
}
