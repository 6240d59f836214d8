//! Priors over model parameters and their unit-hypercube transforms.
//!
//! Nested sampling explores the unit cube; [`unit_to_params`] is the
//! inverse-CDF map that turns a cube point into model parameters so that
//! uniform cube samples follow the prior. The cube ordering is frozen as
//! (alpha, amplitude, sigma_mn) so seeded runs stay reproducible.
//!
//! Inference always treats the ageing offset t0 as 0; the Brownian
//! degeneracy makes t0 unidentifiable at alpha = 1 and the benchmark
//! protocol never generates aged data.

use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FbmParams, ModelKind, ModelParams, SbmParams};
use crate::special::inverse_normal_cdf;

/// Number of inferred parameters per model.
pub const PRIOR_DIM: usize = 3;

const LN_LN_10: f64 = 0.834_032_445_247_955_8;

/// Prior family for the anomalous-diffusion exponent.
///
/// `Uniform` is flat on (0, 2); `Linear` has density alpha/2 there, which
/// deliberately mismatches uniformly drawn ground truths ("wrong prior").
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaPrior {
    Uniform,
    Linear,
}

/// How dataset generation picks the ground-truth exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMode {
    Fixed(f64),
    Uniform,
}

/// Complete prior specification for one inference model: which process,
/// which exponent prior, the upper edge of the uniform noise prior, and
/// the sampling interval the likelihood will use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    model: ModelKind,
    alpha: AlphaPrior,
    noise_max: f64,
    dt: f64,
}

impl PriorSpec {
    pub fn new(model: ModelKind, alpha: AlphaPrior, noise_max: f64, dt: f64) -> Result<Self> {
        if model == ModelKind::Ctrw {
            return Err(Error::InvalidParameter(
                "CTRW is a data-generating process, not an inference model".into(),
            ));
        }
        if !(noise_max.is_finite() && noise_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise prior upper edge must be positive and finite, got {noise_max}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive and finite, got {dt}"
            )));
        }
        Ok(Self {
            model,
            alpha,
            noise_max,
            dt,
        })
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn alpha_prior(&self) -> AlphaPrior {
        self.alpha
    }

    pub fn noise_max(&self) -> f64 {
        self.noise_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Same spec pointed at the other inference model.
    pub fn for_model(&self, model: ModelKind) -> Result<Self> {
        Self::new(model, self.alpha, self.noise_max, self.dt)
    }
}

fn check_interior(u: &[f64]) -> Result<()> {
    if u.len() != PRIOR_DIM {
        return Err(Error::LengthMismatch(format!(
            "prior transform expects {PRIOR_DIM} cube coordinates, got {}",
            u.len()
        )));
    }
    for (index, &value) in u.iter().enumerate() {
        if !(value.is_finite() && value > 0.0 && value < 1.0) {
            return Err(Error::BoundaryCoordinate { index, value });
        }
    }
    Ok(())
}

/// Maps a point of the open unit cube to model parameters; the map pushes
/// the uniform law on the cube forward onto the prior.
///
/// Coordinates, in frozen order: alpha (inverse CDF of the chosen prior),
/// amplitude (log10 standard-normal), sigma_mn (uniform on (0, noise_max)).
pub fn unit_to_params(u: &[f64], spec: &PriorSpec) -> Result<ModelParams<f64>> {
    check_interior(u)?;
    let alpha = match spec.alpha {
        AlphaPrior::Uniform => 2.0 * u[0],
        AlphaPrior::Linear => 2.0 * u[0].sqrt(),
    };
    let amplitude = 10f64.powf(inverse_normal_cdf(u[1]));
    let sigma_mn = spec.noise_max * u[2];
    match spec.model {
        ModelKind::Sbm => Ok(ModelParams::Sbm(SbmParams::new(
            alpha, amplitude, 0.0, spec.dt, sigma_mn,
        )?)),
        ModelKind::Fbm => Ok(ModelParams::Fbm(FbmParams::new(
            alpha, amplitude, spec.dt, sigma_mn,
        )?)),
        ModelKind::Ctrw => unreachable!("rejected at PriorSpec construction"),
    }
}

/// Normalized log prior density at a parameter point.
///
/// Points outside the prior support yield `-inf` (a sentinel value, not an
/// error); structural mismatches (wrong model, wrong dt) are errors.
pub fn log_prior_density(params: &ModelParams<f64>, spec: &PriorSpec) -> Result<f64> {
    if params.kind() != spec.model {
        return Err(Error::InvalidParameter(format!(
            "prior is for {}, parameters are for {}",
            spec.model,
            params.kind()
        )));
    }
    let dt = match params {
        ModelParams::Sbm(p) => p.dt(),
        ModelParams::Fbm(p) => p.dt(),
    };
    if dt != spec.dt {
        return Err(Error::InvalidParameter(format!(
            "prior assumes dt = {}, parameters carry dt = {dt}",
            spec.dt
        )));
    }
    if let ModelParams::Sbm(p) = params {
        if p.t0() != 0.0 {
            // The prior puts no mass on aged processes.
            return Ok(f64::NEG_INFINITY);
        }
    }
    let alpha = params.alpha();
    let amplitude = params.amplitude();
    let sigma_mn = params.sigma_mn();
    if !(0.0 < alpha && alpha < 2.0) || !(0.0 < sigma_mn && sigma_mn < spec.noise_max) {
        return Ok(f64::NEG_INFINITY);
    }
    let ln_alpha = match spec.alpha {
        AlphaPrior::Uniform => -core::f64::consts::LN_2,
        AlphaPrior::Linear => (alpha / 2.0).ln(),
    };
    // Amplitude: log10(sigma) standard normal, with the Jacobian
    // d(log10 sigma)/d(sigma) = 1 / (sigma ln 10).
    let y = amplitude.log10();
    let ln_amplitude =
        -0.5 * (2.0 * core::f64::consts::PI).ln() - 0.5 * y * y - amplitude.ln() - LN_LN_10;
    let ln_noise = -spec.noise_max.ln();
    Ok(ln_alpha + ln_amplitude + ln_noise)
}

/// Draws a ground-truth parameter set for dataset generation: alpha fixed
/// or uniform on (0, 2), log10 of the amplitude standard normal, t0 = 0,
/// and the dataset's (fixed) noise strength recorded as sigma_mn.
pub fn draw_ground_truth<R: Rng + ?Sized>(
    spec: &PriorSpec,
    alpha_mode: AlphaMode,
    sigma_mn: f64,
    rng: &mut R,
) -> Result<ModelParams<f64>> {
    if !(sigma_mn.is_finite() && sigma_mn >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dataset sigma_mn must be finite and nonnegative, got {sigma_mn}"
        )));
    }
    let alpha = match alpha_mode {
        AlphaMode::Fixed(a) => {
            if !(a.is_finite() && 0.0 < a && a < 2.0) {
                return Err(Error::InvalidParameter(format!(
                    "fixed alpha must lie in (0, 2), got {a}"
                )));
            }
            a
        }
        AlphaMode::Uniform => {
            let u: f64 = Open01.sample(rng);
            2.0 * u
        }
    };
    let log10_amplitude: f64 = StandardNormal.sample(rng);
    let amplitude = 10f64.powf(log10_amplitude);
    match spec.model {
        ModelKind::Sbm => Ok(ModelParams::Sbm(SbmParams::new(
            alpha, amplitude, 0.0, spec.dt, sigma_mn,
        )?)),
        ModelKind::Fbm => Ok(ModelParams::Fbm(FbmParams::new(
            alpha, amplitude, spec.dt, sigma_mn,
        )?)),
        ModelKind::Ctrw => unreachable!("rejected at PriorSpec construction"),
    }
}
