//! Stochastic-process models and their exact likelihoods.
//!
//! Two inference models share one interface: scaled Brownian motion (SBM,
//! independent increments with a power-law clock) and fractional Brownian
//! motion (FBM, stationary correlated increments). Both carry optional
//! measurement noise. Every likelihood here is exact for the discretely
//! observed process, not an approximation, which is what makes the dense
//! route in [`dense_gaussian_loglik`] usable as an oracle in tests.

mod fbm;
mod gaussian;
mod sbm;
mod toeplitz;

pub use fbm::{
    fbm_autocov, fbm_autocov_seq, fbm_increment_covariance, fbm_loglik_1d, fbm_loglik_multi,
    FbmParams,
};
pub use gaussian::{dense_gaussian_loglik, CovarianceMatrix};
pub use sbm::{
    sbm_increment_covariance, sbm_loglik_1d, sbm_loglik_multi, sbm_step_variance, SbmParams,
};

pub(crate) use sbm::step_variances;
pub(crate) use toeplitz::toeplitz_gaussian_sample;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

/// Which stochastic process a trajectory or fit refers to. CTRW appears
/// only as a data-generating process, never as an inference model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Sbm,
    Fbm,
    Ctrw,
}

impl core::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            ModelKind::Sbm => "sbm",
            ModelKind::Fbm => "fbm",
            ModelKind::Ctrw => "ctrw",
        })
    }
}

impl core::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sbm" => Ok(ModelKind::Sbm),
            "fbm" => Ok(ModelKind::Fbm),
            "ctrw" => Ok(ModelKind::Ctrw),
            other => Err(Error::InvalidParameter(format!(
                "unknown model kind {other:?} (expected sbm, fbm, or ctrw)"
            ))),
        }
    }
}

/// One coordinate's increment series, validated to be finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementSeries<T>(Vec<T>);

impl<T: Real> IncrementSeries<T> {
    /// Wraps raw increments; may be empty (a length-1 trajectory has no
    /// increments), but every entry must be finite.
    pub fn new(values: Vec<T>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite increment at index {i}"
                )));
            }
        }
        Ok(Self(values))
    }

    /// Consecutive differences of a position series (len >= 1).
    pub fn from_positions(positions: &[T]) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptyInput("position series"));
        }
        let diffs = positions.windows(2).map(|w| w[1] - w[0]).collect();
        Self::new(diffs)
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Inference-model parameters, tagged by model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams<T> {
    Sbm(SbmParams<T>),
    Fbm(FbmParams<T>),
}

impl<T: Real> ModelParams<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Sbm(_) => ModelKind::Sbm,
            ModelParams::Fbm(_) => ModelKind::Fbm,
        }
    }

    pub fn alpha(&self) -> T {
        match self {
            ModelParams::Sbm(p) => p.alpha(),
            ModelParams::Fbm(p) => p.alpha(),
        }
    }

    /// The per-step amplitude parameter: sigma1 for SBM, sigma for FBM.
    pub fn amplitude(&self) -> T {
        match self {
            ModelParams::Sbm(p) => p.sigma1(),
            ModelParams::Fbm(p) => p.sigma(),
        }
    }

    pub fn sigma_mn(&self) -> T {
        match self {
            ModelParams::Sbm(p) => p.sigma_mn(),
            ModelParams::Fbm(p) => p.sigma_mn(),
        }
    }
}

/// Log-likelihood of one coordinate's increments under either model.
pub fn loglik_1d<T: Real>(dx: &IncrementSeries<T>, params: &ModelParams<T>) -> Result<T> {
    match params {
        ModelParams::Sbm(p) => sbm_loglik_1d(dx.values(), p),
        ModelParams::Fbm(p) => fbm_loglik_1d(dx.values(), p),
    }
}

/// Joint log-likelihood of a 1- to 3-dimensional trajectory: coordinates
/// are independent given the shared parameters, so the result is the sum
/// of the per-coordinate terms (computed in one sweep).
pub fn loglik_multidim<T: Real>(
    series: &[IncrementSeries<T>],
    params: &ModelParams<T>,
) -> Result<T> {
    if series.is_empty() || series.len() > 3 {
        return Err(Error::InvalidParameter(format!(
            "expected 1 to 3 coordinate series, got {}",
            series.len()
        )));
    }
    let slices: Vec<&[T]> = series.iter().map(|s| s.values()).collect();
    match params {
        ModelParams::Sbm(p) => sbm_loglik_multi(&slices, p),
        ModelParams::Fbm(p) => fbm_loglik_multi(&slices, p),
    }
}
