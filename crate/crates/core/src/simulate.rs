//! Trajectory generators with exactly known finite-dimensional laws.
//!
//! Every generator is a pure function of (params, N, dims, seed): identical
//! inputs reproduce identical trajectories bit for bit. Randomness is split
//! into named per-purpose streams (see [`crate::seeds`]), so the x and y
//! coordinates of a 2-d walk come from independent generators and a
//! trajectory can be regenerated piecewise.
//!
//! Generators emit noise-free paths; measurement noise is layered on
//! afterwards by [`add_measurement_noise`] so the same latent path can be
//! reused at several noise strengths.

use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    fbm_autocov_seq, step_variances, toeplitz_gaussian_sample, FbmParams, IncrementSeries,
    ModelKind, SbmParams,
};
use crate::num::{real, Real};
use crate::seeds::{child_seed, stream_rng, string_tag};

/// Version stamp for the serialized trajectory schema.
pub const TRAJECTORY_SCHEMA_VERSION: u32 = 1;

/// The full parameter set a trajectory was generated with. For CTRW the
/// latent walk is Brownian in operational time with unit variance per unit
/// of operational time; `ds` records the operational step and `sigma` the
/// per-unit jump scale (1.0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth<T> {
    pub alpha: T,
    pub sigma: T,
    pub t0: T,
    pub sigma_mn: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ds: Option<T>,
}

/// One simulated trajectory: observed positions on a regular time grid,
/// together with everything needed to regenerate or score it.
///
/// `positions[d][i]` is coordinate d at time `i * dt`, with
/// `positions[d][0] == 0` by convention (the first observed position is the
/// reference point, so measurement noise shows up only relative to it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord<T> {
    pub schema_version: u32,
    pub id: String,
    pub model: ModelKind,
    pub dims: usize,
    pub dt: T,
    pub seed: u64,
    pub ground_truth: GroundTruth<T>,
    pub positions: Vec<Vec<T>>,
}

impl<T: Real> TrajectoryRecord<T> {
    /// Number of observed steps N (positions run 0..=N).
    pub fn n_points(&self) -> usize {
        self.positions.first().map_or(0, |row| row.len() - 1)
    }

    /// Checks the structural invariants of a record, e.g. after
    /// deserializing one from an untrusted file.
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dims) {
            return Err(Error::InvalidParameter(format!(
                "dims must be 1..=3, got {}",
                self.dims
            )));
        }
        if self.positions.len() != self.dims {
            return Err(Error::LengthMismatch(format!(
                "expected {} coordinate rows, found {}",
                self.dims,
                self.positions.len()
            )));
        }
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive and finite, got {}",
                self.dt
            )));
        }
        let len = self.positions[0].len();
        if len < 2 {
            return Err(Error::InvalidParameter(
                "a trajectory needs at least one step".into(),
            ));
        }
        for (d, row) in self.positions.iter().enumerate() {
            if row.len() != len {
                return Err(Error::LengthMismatch(format!(
                    "coordinate {d} has {} samples, coordinate 0 has {len}",
                    row.len()
                )));
            }
            if row[0] != T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "coordinate {d} does not start at the origin"
                )));
            }
            if let Some(i) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite position at coordinate {d}, index {i}"
                )));
            }
        }
        Ok(())
    }

    /// Per-coordinate increment series, ready for the likelihoods.
    pub fn increment_series(&self) -> Result<Vec<IncrementSeries<T>>> {
        self.positions
            .iter()
            .map(|row| IncrementSeries::from_positions(row))
            .collect()
    }
}

fn check_shape(n: usize, dims: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "trajectory length N must be at least 1".into(),
        ));
    }
    if !(1..=3).contains(&dims) {
        return Err(Error::InvalidParameter(format!(
            "dims must be 1..=3, got {dims}"
        )));
    }
    Ok(())
}

fn cumulative_from_zero<T: Real>(increments: &[T]) -> Vec<T> {
    let mut positions = Vec::with_capacity(increments.len() + 1);
    let mut x = T::zero();
    positions.push(x);
    for &dx in increments {
        x += dx;
        positions.push(x);
    }
    positions
}

/// Scaled Brownian motion: independent Gaussian steps whose variances follow
/// the process's power-law clock. Pass noise-free parameters; layering noise
/// is [`add_measurement_noise`]'s job.
pub fn simulate_sbm<T>(p: &SbmParams<T>, n: usize, dims: usize, seed: u64) -> Result<TrajectoryRecord<T>>
where
    T: Real,
    StandardNormal: Distribution<T>,
{
    check_shape(n, dims)?;
    if p.sigma_mn() != T::zero() {
        return Err(Error::InvalidParameter(
            "simulate_sbm generates latent paths; set sigma_mn = 0 and use add_measurement_noise"
                .into(),
        ));
    }
    let variances = step_variances(p, n)?;
    let sds: Vec<T> = variances.iter().map(|&v| v.sqrt()).collect();
    let step_seed = child_seed(seed, string_tag("steps"));
    let positions = (0..dims)
        .map(|d| {
            let mut rng = stream_rng(step_seed, d as u64);
            let increments: Vec<T> = sds
                .iter()
                .map(|&sd| sd * StandardNormal.sample(&mut rng))
                .collect();
            cumulative_from_zero(&increments)
        })
        .collect();
    Ok(TrajectoryRecord {
        schema_version: TRAJECTORY_SCHEMA_VERSION,
        id: format!("sbm-{seed:016x}"),
        model: ModelKind::Sbm,
        dims,
        dt: p.dt(),
        seed,
        ground_truth: GroundTruth {
            alpha: p.alpha(),
            sigma: p.sigma1(),
            t0: p.t0(),
            sigma_mn: T::zero(),
            ds: None,
        },
        positions,
    })
}

/// Fractional Brownian motion, sampled exactly (O(N^2)) by running the
/// stationary innovations recursion forward: each increment is its best
/// linear prediction from the past plus an innovation of the exact
/// conditional variance, so the joint law matches the autocovariance
/// without any truncation error.
pub fn simulate_fbm<T>(p: &FbmParams<T>, n: usize, dims: usize, seed: u64) -> Result<TrajectoryRecord<T>>
where
    T: Real,
    StandardNormal: Distribution<T>,
{
    check_shape(n, dims)?;
    if p.sigma_mn() != T::zero() {
        return Err(Error::InvalidParameter(
            "simulate_fbm generates latent paths; set sigma_mn = 0 and use add_measurement_noise"
                .into(),
        ));
    }
    let gamma = fbm_autocov_seq(p, n);
    let step_seed = child_seed(seed, string_tag("steps"));
    let positions = (0..dims)
        .map(|d| {
            let mut rng = stream_rng(step_seed, d as u64);
            let z: Vec<T> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            toeplitz_gaussian_sample(&gamma, &z).map(|inc| cumulative_from_zero(&inc))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryRecord {
        schema_version: TRAJECTORY_SCHEMA_VERSION,
        id: format!("fbm-{seed:016x}"),
        model: ModelKind::Fbm,
        dims,
        dt: p.dt(),
        seed,
        ground_truth: GroundTruth {
            alpha: p.alpha(),
            sigma: p.sigma(),
            t0: T::zero(),
            sigma_mn: T::zero(),
            ds: None,
        },
        positions,
    })
}

/// Overlays i.i.d. Gaussian measurement errors on every observed position.
///
/// The first observed position stays the coordinate origin: recorded
/// positions are re-anchored to the (noisy) initial fix, i.e.
/// `x'_i = x_i + eta_i - eta_0`. Increments then pick up exactly the
/// tridiagonal noise structure the likelihoods assume: every increment
/// variance gains `2 sigma_mn^2` and adjacent increments covary by
/// `-sigma_mn^2`.
///
/// With `sigma_mn == 0` the output positions are bit-identical to the input.
pub fn add_measurement_noise<T>(
    traj: &TrajectoryRecord<T>,
    sigma_mn: T,
    seed: u64,
) -> Result<TrajectoryRecord<T>>
where
    T: Real,
    StandardNormal: Distribution<T>,
{
    if !(sigma_mn.is_finite() && sigma_mn >= T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "sigma_mn must be finite and nonnegative, got {sigma_mn}"
        )));
    }
    let mut out = traj.clone();
    out.ground_truth.sigma_mn = sigma_mn;
    if sigma_mn == T::zero() {
        return Ok(out);
    }
    let noise_seed = child_seed(seed, string_tag("noise"));
    for (d, row) in out.positions.iter_mut().enumerate() {
        let mut rng = stream_rng(noise_seed, d as u64);
        let eta0: T = sigma_mn * StandardNormal.sample(&mut rng);
        for x in row.iter_mut().skip(1) {
            let eta: T = sigma_mn * StandardNormal.sample(&mut rng);
            *x += eta - eta0;
        }
    }
    Ok(out)
}

/// One draw from the standard one-sided alpha-stable law, the positive
/// distribution with Laplace transform E[e^{-s T}] = e^{-s^alpha}.
///
/// Uses the Kanter/Chambers-Mallows-Stuck construction
/// S = sin(a u) / sin(u)^{1/a} * (sin((1-a) u) / w)^{(1-a)/a}
/// with u uniform on (0, pi) and w unit-exponential. At `alpha == 1` the
/// law degenerates to the point mass at 1 and exactly 1.0 is returned.
///
/// Panics if `alpha` is outside (0, 1].
pub fn sample_one_sided_stable<T, R>(alpha: T, rng: &mut R) -> T
where
    T: Real,
    R: Rng + ?Sized,
    Open01: Distribution<T>,
{
    assert!(
        alpha > T::zero() && alpha <= T::one(),
        "one-sided stable law requires 0 < alpha <= 1"
    );
    if alpha == T::one() {
        return T::one();
    }
    let u = real::<T>(core::f64::consts::PI) * Open01.sample(rng);
    let w = -Open01.sample(rng).ln();
    let one = T::one();
    let first = (alpha * u).sin() / u.sin().powf(one / alpha);
    let second = (((one - alpha) * u).sin() / w).powf((one - alpha) / alpha);
    first * second
}

/// Continuous-time random walk observed on a regular grid.
///
/// The walk lives in operational time s advancing in steps of `ds`: each
/// step carries a Gaussian jump of variance `ds` per coordinate and costs a
/// physical-time wait `ds^{1/alpha} * S` with S one-sided alpha-stable, so
/// waits are heavy-tailed for alpha < 1 and exactly `ds` at alpha = 1. The
/// observation at grid time `t_i = i * dt` is the latent position at the
/// last operational step whose physical time is <= t_i; trajectories
/// therefore show flat stretches (trapping) for small alpha.
pub fn simulate_ctrw<T>(
    alpha: T,
    n: usize,
    dims: usize,
    dt: T,
    ds: T,
    seed: u64,
) -> Result<TrajectoryRecord<T>>
where
    T: Real,
    StandardNormal: Distribution<T>,
    Open01: Distribution<T>,
{
    check_shape(n, dims)?;
    if !(alpha.is_finite() && alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "CTRW requires 0 < alpha <= 1, got {alpha}"
        )));
    }
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive and finite, got {dt}"
        )));
    }
    if !(ds.is_finite() && ds > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "ds must be positive and finite, got {ds}"
        )));
    }

    let mut wait_rng = stream_rng(child_seed(seed, string_tag("waits")), 0);
    let jump_seed = child_seed(seed, string_tag("jumps"));
    let mut jump_rngs: Vec<_> = (0..dims).map(|d| stream_rng(jump_seed, d as u64)).collect();

    let wait_scale = ds.powf(T::one() / alpha);
    let jump_sd = ds.sqrt();
    let mut positions = vec![Vec::with_capacity(n + 1); dims];
    let mut walker = vec![T::zero(); dims];
    let mut t_phys = T::zero();
    let mut next_grid = 0usize;
    while next_grid <= n {
        let t_next = t_phys + wait_scale * sample_one_sided_stable(alpha, &mut wait_rng);
        // Grid times in [t_phys, t_next) see the walker before this jump;
        // a grid time equal to t_next sees the jumped walker next round.
        while next_grid <= n && real::<T>(next_grid as f64) * dt < t_next {
            for (row, &x) in positions.iter_mut().zip(walker.iter()) {
                row.push(x);
            }
            next_grid += 1;
        }
        for (x, rng) in walker.iter_mut().zip(jump_rngs.iter_mut()) {
            *x += jump_sd * StandardNormal.sample(rng);
        }
        t_phys = t_next;
    }

    Ok(TrajectoryRecord {
        schema_version: TRAJECTORY_SCHEMA_VERSION,
        id: format!("ctrw-{seed:016x}"),
        model: ModelKind::Ctrw,
        dims,
        dt,
        seed,
        ground_truth: GroundTruth {
            alpha,
            sigma: T::one(),
            t0: T::zero(),
            sigma_mn: T::zero(),
            ds: Some(ds),
        },
        positions,
    })
}

/// Ensemble mean squared displacement from the common origin, with the
/// standard error over trajectories at each lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsdCurve<T> {
    pub lags: Vec<T>,
    pub msd: Vec<T>,
    pub stderr: Vec<T>,
}

/// Averages squared displacements over an ensemble sharing one grid.
///
/// `msd[k-1]` is the mean over trajectories of the squared displacement from
/// the origin at lag `k * dt`, summed over coordinates; `stderr` is the
/// corresponding standard error of that mean (zero for a single trajectory).
pub fn msd_ensemble<T: Real>(trajs: &[TrajectoryRecord<T>]) -> Result<MsdCurve<T>> {
    let first = trajs.first().ok_or(Error::EmptyInput("trajectory ensemble"))?;
    let n = first.n_points();
    for t in trajs {
        if t.n_points() != n || t.dt != first.dt || t.dims != first.dims {
            return Err(Error::LengthMismatch(
                "msd_ensemble needs a shared (N, dt, dims) grid".into(),
            ));
        }
    }
    let m = real::<T>(trajs.len() as f64);
    let mut lags = Vec::with_capacity(n);
    let mut msd = Vec::with_capacity(n);
    let mut stderr = Vec::with_capacity(n);
    for k in 1..=n {
        let mut sum = T::zero();
        let mut sum_sq = T::zero();
        for t in trajs {
            let r2 = t
                .positions
                .iter()
                .map(|row| row[k] * row[k])
                .fold(T::zero(), |acc, v| acc + v);
            sum += r2;
            sum_sq += r2 * r2;
        }
        let mean = sum / m;
        let se = if trajs.len() > 1 {
            // Sample variance of per-trajectory squared displacements.
            let var = (sum_sq - sum * sum / m) / (m - T::one());
            (var.max(T::zero()) / m).sqrt()
        } else {
            T::zero()
        };
        lags.push(real::<T>(k as f64) * first.dt);
        msd.push(mean);
        stderr.push(se);
    }
    Ok(MsdCurve { lags, msd, stderr })
}
