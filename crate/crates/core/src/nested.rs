//! Nested sampling: log-evidence with an uncertainty estimate plus weighted
//! posterior samples, for any (prior transform, log-likelihood) pair.
//!
//! The engine maintains `n_live` points uniform in the likelihood-constrained
//! prior, repeatedly retires the worst one, and books its prior-volume slab
//! with the deterministic shrinkage ln X_k = -k / n_live and trapezoid
//! weights. Replacement points come from an exploration kernel that walks
//! inside the hard constraint L > threshold; the shipped kernel is an
//! adaptive random-walk Metropolis sampler on the unit cube, but anything
//! implementing [`ExplorationKernel`] can be plugged in (the kernel affects
//! cost, never the evidence contract).
//!
//! All mass bookkeeping happens in log space via log-sum-exp, so likelihood
//! ratios spanning thousands of nats are routine.

use serde::{Deserialize, Serialize};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, PartialRun, Result};
use crate::num::logaddexp;
use crate::seeds::{stream_rng, StreamRng};

/// Tuning knobs for one nested-sampling run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedConfig {
    pub n_live: usize,
    pub steps_per_replacement: usize,
    /// Stop once the largest possible remaining contribution,
    /// max live likelihood times the leftover prior volume, falls below
    /// this fraction of the accumulated evidence.
    pub termination_fraction: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Keep a per-iteration (ln X, ln L, acceptance) trace.
    pub record_diagnostics: bool,
}

impl Default for NestedConfig {
    fn default() -> Self {
        Self {
            n_live: 100,
            steps_per_replacement: 40,
            termination_fraction: 1e-4,
            max_iterations: 1_000_000,
            seed: 0,
            record_diagnostics: false,
        }
    }
}

impl NestedConfig {
    fn validate(&self) -> Result<()> {
        if self.n_live < 2 {
            return Err(Error::InvalidParameter(format!(
                "nested sampling needs at least 2 live points, got {}",
                self.n_live
            )));
        }
        if self.steps_per_replacement < 1 {
            return Err(Error::InvalidParameter(
                "steps_per_replacement must be at least 1".into(),
            ));
        }
        if !(self.termination_fraction > 0.0 && self.termination_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "termination_fraction must lie in (0, 1), got {}",
                self.termination_fraction
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One posterior draw: cube coordinates, the mapped parameters, its
/// log-likelihood, and its normalized posterior weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedSample<P> {
    pub cube: Vec<f64>,
    pub params: P,
    pub log_lik: f64,
    pub weight: f64,
}

/// Per-iteration trace entry for debugging runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationDiagnostic {
    pub iteration: usize,
    pub ln_x: f64,
    pub log_lik: f64,
    pub acceptance: f64,
}

/// Everything a nested run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedResult<P> {
    pub log_z: f64,
    /// sqrt(H / n_live), the standard shrinkage-noise estimate.
    pub log_z_stderr: f64,
    /// Information (KL divergence posterior from prior), in nats.
    pub information: f64,
    pub iterations: usize,
    pub n_live: usize,
    /// Posterior samples sorted by ascending log-likelihood; weights are
    /// normalized to sum to 1.
    pub samples: Vec<NestedSample<P>>,
    /// Per-replacement trace, empty unless requested in the config.
    pub diagnostics: Vec<IterationDiagnostic>,
}

/// Outcome of one constrained exploration: the end point, its
/// log-likelihood, and the acceptance bookkeeping for diagnostics.
#[derive(Debug, Clone)]
pub struct Replacement {
    pub point: Vec<f64>,
    pub log_lik: f64,
    pub accepted: usize,
    pub proposed: usize,
}

/// A sampler for the constrained prior {u : log L(u) > threshold}.
///
/// Implementations must only ever move to points strictly above the
/// threshold; if every proposal fails they return the start point, which
/// the engine counts as a stalled replacement (a diagnostic, not an error).
pub trait ExplorationKernel {
    fn explore(
        &mut self,
        start: &[f64],
        start_log_lik: f64,
        threshold: f64,
        steps: usize,
        eval: &mut dyn FnMut(&[f64]) -> f64,
        rng: &mut StreamRng,
    ) -> Replacement;
}

/// Adaptive random-walk Metropolis kernel on the unit cube.
///
/// Proposals are isotropic Gaussian steps folded back into the cube by
/// reflection; a move is accepted iff its likelihood strictly beats the
/// threshold (the constrained-prior target is flat, so there is no ratio to
/// compute). The step scale adapts towards roughly half of the proposals
/// being accepted, which only tunes mixing speed: any scale leaves the
/// uniform law on the constrained region invariant.
#[derive(Debug, Clone)]
pub struct RandomWalkKernel {
    scale: f64,
}

impl RandomWalkKernel {
    const SCALE_MIN: f64 = 1e-8;
    const SCALE_MAX: f64 = 0.5;
    const ADAPT_RATE: f64 = 0.05;

    pub fn new() -> Self {
        Self { scale: 0.1 }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl Default for RandomWalkKernel {
    fn default() -> Self {
        Self::new()
    }
}

fn reflect_into_unit(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r > 1.0 {
        2.0 - r
    } else {
        r
    }
}

impl ExplorationKernel for RandomWalkKernel {
    fn explore(
        &mut self,
        start: &[f64],
        start_log_lik: f64,
        threshold: f64,
        steps: usize,
        eval: &mut dyn FnMut(&[f64]) -> f64,
        rng: &mut StreamRng,
    ) -> Replacement {
        let mut point = start.to_vec();
        let mut log_lik = start_log_lik;
        let mut candidate = vec![0.0; point.len()];
        let mut accepted = 0;
        for _ in 0..steps {
            for (c, &p) in candidate.iter_mut().zip(point.iter()) {
                let step: f64 = StandardNormal.sample(rng);
                *c = reflect_into_unit(p + self.scale * step);
            }
            let cand_ll = eval(&candidate);
            if cand_ll > threshold {
                point.copy_from_slice(&candidate);
                log_lik = cand_ll;
                accepted += 1;
                self.scale = (self.scale * Self::ADAPT_RATE.exp()).min(Self::SCALE_MAX);
            } else {
                self.scale = (self.scale * (-Self::ADAPT_RATE).exp()).max(Self::SCALE_MIN);
            }
        }
        Replacement {
            point,
            log_lik,
            accepted,
            proposed: steps,
        }
    }
}

struct LivePoint<P> {
    cube: Vec<f64>,
    params: P,
    log_lik: f64,
}

/// Runs nested sampling with the default random-walk kernel.
///
/// `transform` maps open-unit-cube points to parameters (its Err means "off
/// the prior support", which the engine treats as likelihood -inf, never as
/// a failure); `loglik` scores parameters and may return -inf itself.
pub fn run_nested<P>(
    dim: usize,
    transform: impl Fn(&[f64]) -> Result<P>,
    loglik: impl Fn(&P) -> f64,
    cfg: &NestedConfig,
) -> Result<NestedResult<P>> {
    let mut kernel = RandomWalkKernel::new();
    run_nested_with_kernel(dim, transform, loglik, &mut kernel, cfg)
}

/// Runs nested sampling with a caller-supplied exploration kernel.
pub fn run_nested_with_kernel<P, K: ExplorationKernel>(
    dim: usize,
    transform: impl Fn(&[f64]) -> Result<P>,
    loglik: impl Fn(&P) -> f64,
    kernel: &mut K,
    cfg: &NestedConfig,
) -> Result<NestedResult<P>> {
    cfg.validate()?;
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "the parameter cube needs at least one dimension".into(),
        ));
    }
    let mut rng = stream_rng(cfg.seed, 0);
    let n = cfg.n_live;

    let score = |u: &[f64]| -> (Option<P>, f64) {
        match transform(u) {
            Ok(p) => {
                let ll = loglik(&p);
                (Some(p), ll)
            }
            Err(_) => (None, f64::NEG_INFINITY),
        }
    };

    let mut live: Vec<LivePoint<P>> = Vec::with_capacity(n);
    for _ in 0..n {
        // Boundary draws (coordinate exactly 0) are measure-zero; retry.
        let mut attempts = 0;
        loop {
            let cube: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            if let Ok(params) = transform(&cube) {
                let log_lik = loglik(&params);
                live.push(LivePoint {
                    cube,
                    params,
                    log_lik,
                });
                break;
            }
            attempts += 1;
            if attempts > 100 {
                return Err(Error::NumericalDomain(
                    "could not draw a valid prior point in 100 attempts".into(),
                ));
            }
        }
    }

    let nf = n as f64;
    // Trapezoid slab for iteration k: (X_{k-1} - X_{k+1}) / 2.
    let ln_slab_base = (-(-2.0 / nf).exp()).ln_1p() - core::f64::consts::LN_2;

    let mut log_z = f64::NEG_INFINITY;
    let mut dead: Vec<(Vec<f64>, P, f64, f64)> = Vec::new(); // (cube, params, ln L, ln wL)
    let mut diagnostics = Vec::new();
    let mut iteration = 0usize;

    loop {
        iteration += 1;

        let worst = live
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.log_lik.partial_cmp(&b.1.log_lik).unwrap())
            .map(|(i, _)| i)
            .expect("live set is non-empty");
        let threshold = live[worst].log_lik;

        let ln_w = -((iteration - 1) as f64) / nf + ln_slab_base;
        let ln_wl = ln_w + threshold;
        log_z = logaddexp(log_z, ln_wl);

        // Retire the worst point and refill its slot from a random survivor.
        let start = if n > 1 {
            let mut idx = rng.random_range(0..n - 1);
            if idx >= worst {
                idx += 1;
            }
            idx
        } else {
            worst
        };
        let start_cube = live[start].cube.clone();
        let start_ll = live[start].log_lik;
        let mut eval = |u: &[f64]| score(u).1;
        let rep = kernel.explore(
            &start_cube,
            start_ll,
            threshold,
            cfg.steps_per_replacement,
            &mut eval,
            &mut rng,
        );
        if cfg.record_diagnostics {
            diagnostics.push(IterationDiagnostic {
                iteration,
                ln_x: -(iteration as f64) / nf,
                log_lik: threshold,
                acceptance: rep.accepted as f64 / rep.proposed.max(1) as f64,
            });
        }
        let (params, log_lik) = if rep.accepted > 0 {
            match transform(&rep.point) {
                Ok(p) => (p, rep.log_lik),
                Err(_) => {
                    return Err(Error::NumericalDomain(
                        "exploration accepted a point off the prior support".into(),
                    ))
                }
            }
        } else {
            // Stalled replacement: clone the start point's slot.
            (score(&start_cube).0.expect("start point was valid"), start_ll)
        };
        let removed = core::mem::replace(
            &mut live[worst],
            LivePoint {
                cube: rep.point,
                params,
                log_lik,
            },
        );
        dead.push((removed.cube, removed.params, removed.log_lik, ln_wl));

        let ln_x = -(iteration as f64) / nf;
        let max_live = live
            .iter()
            .map(|p| p.log_lik)
            .fold(f64::NEG_INFINITY, f64::max);
        if max_live + ln_x <= cfg.termination_fraction.ln() + log_z {
            break;
        }
        if iteration >= cfg.max_iterations {
            let partial = PartialRun {
                iterations: iteration as u64,
                log_z,
                ln_x,
                max_live_log_lik: max_live,
                live_points: live
                    .iter()
                    .map(|p| (p.cube.clone(), p.log_lik))
                    .collect(),
            };
            return Err(Error::NestedNonConvergence {
                iterations: iteration as u64,
                partial: Box::new(partial),
            });
        }
    }

    // Fold the survivors in: the leftover volume X_K, split evenly.
    let ln_x_final = -(iteration as f64) / nf;
    let ln_w_live = ln_x_final - nf.ln();
    let mut samples: Vec<(Vec<f64>, P, f64, f64)> = dead;
    for p in live {
        let ln_wl = ln_w_live + p.log_lik;
        log_z = logaddexp(log_z, ln_wl);
        samples.push((p.cube, p.params, p.log_lik, ln_wl));
    }

    // Posterior weights, information, and the shrinkage-noise error bar.
    let mut weights: Vec<f64> = samples
        .iter()
        .map(|(_, _, _, ln_wl)| {
            if *ln_wl == f64::NEG_INFINITY {
                0.0
            } else {
                (ln_wl - log_z).exp()
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::NumericalDomain(format!(
            "posterior weights sum to {total}; the likelihood may be -inf everywhere"
        )));
    }
    for w in &mut weights {
        *w /= total;
    }
    let mut information = 0.0;
    for ((_, _, ll, _), &w) in samples.iter().zip(weights.iter()) {
        if w > 0.0 {
            information += w * ll;
        }
    }
    information -= log_z;
    let information = information.max(0.0);
    let log_z_stderr = (information / nf).sqrt();

    let mut out: Vec<NestedSample<P>> = samples
        .into_iter()
        .zip(weights)
        .map(|((cube, params, log_lik, _), weight)| NestedSample {
            cube,
            params,
            log_lik,
            weight,
        })
        .collect();
    out.sort_by(|a, b| a.log_lik.partial_cmp(&b.log_lik).unwrap());

    Ok(NestedResult {
        log_z,
        log_z_stderr,
        information,
        iterations: iteration,
        n_live: n,
        samples: out,
        diagnostics,
    })
}

/// Smallest value whose cumulative normalized weight reaches `q`, after
/// sorting by value: the weighted generalization of an order statistic.
pub fn weighted_quantile(values: &[f64], weights: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput("weighted quantile"));
    }
    if values.len() != weights.len() {
        return Err(Error::LengthMismatch(format!(
            "{} values vs {} weights",
            values.len(),
            weights.len()
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quantile level must lie in (0, 1), got {q}"
        )));
    }
    let mut total = 0.0;
    for (&v, &w) in values.iter().zip(weights) {
        if !v.is_finite() || !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidParameter(
                "weighted quantile needs finite values and nonnegative weights".into(),
            ));
        }
        total += w;
    }
    if total <= 0.0 {
        return Err(Error::InvalidParameter(
            "weighted quantile needs positive total weight".into(),
        ));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let target = q * total;
    let mut cum = 0.0;
    for &i in &order {
        cum += weights[i];
        if cum >= target {
            return Ok(values[i]);
        }
    }
    Ok(values[order[values.len() - 1]])
}

/// Renders a diagnostics trace as CSV.
pub fn diagnostics_csv(diags: &[IterationDiagnostic]) -> String {
    let mut out = String::from("iteration,ln_x,log_lik,acceptance\n");
    for d in diags {
        out.push_str(&format!(
            "{},{},{},{}\n",
            d.iteration, d.ln_x, d.log_lik, d.acceptance
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{normal_cdf, normal_pdf};

    fn identity_1d(u: &[f64]) -> Result<f64> {
        if u[0] <= 0.0 || u[0] >= 1.0 {
            return Err(Error::BoundaryCoordinate {
                index: 0,
                value: u[0],
            });
        }
        Ok(2.0 * u[0])
    }

    #[test]
    fn constant_likelihood_recovers_its_level() {
        let cfg = NestedConfig {
            seed: 5,
            ..NestedConfig::default()
        };
        let res = run_nested(2, |u| Ok([u[0], u[1]]), |_| 47.0, &cfg).unwrap();
        // The trapezoid rule loses O(1/2n) of unit mass; allow that plus
        // the reported noise.
        assert!(
            (res.log_z - 47.0).abs() <= 3.0 * res.log_z_stderr + 0.02,
            "logZ {} +- {}",
            res.log_z,
            res.log_z_stderr
        );
        assert!(res.information < 0.05, "H = {}", res.information);
        let wsum: f64 = res.samples.iter().map(|s| s.weight).sum();
        assert!((wsum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn gaussian_toy_matches_the_analytic_evidence() {
        // Uniform prior on (0, 2), standard normal likelihood in theta:
        // Z = (Phi(2) - Phi(0)) / 2.
        let want = ((normal_cdf(2.0) - 0.5) / 2.0).ln();
        for seed in [1u64, 2, 3] {
            let cfg = NestedConfig {
                seed,
                ..NestedConfig::default()
            };
            let res = run_nested(
                1,
                identity_1d,
                |&theta| -0.5 * theta * theta - 0.5 * (2.0 * core::f64::consts::PI).ln(),
                &cfg,
            )
            .unwrap();
            assert!(
                (res.log_z - want).abs() <= 3.0 * res.log_z_stderr,
                "seed {seed}: logZ {} want {want} +- {}",
                res.log_z,
                res.log_z_stderr
            );
        }
    }

    #[test]
    fn gaussian_toy_posterior_mean_matches_the_truncated_normal() {
        let cfg = NestedConfig {
            seed: 9,
            ..NestedConfig::default()
        };
        let res = run_nested(
            1,
            identity_1d,
            |&theta| -0.5 * theta * theta - 0.5 * (2.0 * core::f64::consts::PI).ln(),
            &cfg,
        )
        .unwrap();
        let mean: f64 = res.samples.iter().map(|s| s.weight * s.params).sum();
        let want = (normal_pdf(0.0) - normal_pdf(2.0)) / (normal_cdf(2.0) - 0.5);
        // Posterior-moment noise is a few times the evidence noise.
        assert!(
            (mean - want).abs() < 0.08,
            "posterior mean {mean}, want {want}"
        );
    }

    #[test]
    fn dead_sequence_is_monotone_and_strictly_constrained() {
        let cfg = NestedConfig {
            seed: 21,
            record_diagnostics: true,
            ..NestedConfig::default()
        };
        let res = run_nested(
            1,
            identity_1d,
            |&theta| -0.5 * theta * theta,
            &cfg,
        )
        .unwrap();
        let dead = &res.diagnostics;
        assert!(!dead.is_empty());
        for pair in dead.windows(2) {
            assert!(pair[1].log_lik >= pair[0].log_lik, "dead sequence dipped");
            assert!(pair[1].ln_x < pair[0].ln_x);
        }
        assert_eq!(res.iterations, dead.len());
    }

    #[test]
    fn short_leash_reports_nonconvergence_with_state() {
        let cfg = NestedConfig {
            seed: 3,
            max_iterations: 5,
            ..NestedConfig::default()
        };
        match run_nested(1, identity_1d, |&theta| -theta, &cfg) {
            Err(Error::NestedNonConvergence { iterations, partial }) => {
                assert_eq!(iterations, 5);
                assert_eq!(partial.iterations, 5);
                assert_eq!(partial.live_points.len(), 100);
                assert!(partial.log_z.is_finite());
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn config_validation_rejects_degenerate_settings() {
        let bad_live = NestedConfig {
            n_live: 1,
            ..NestedConfig::default()
        };
        assert!(run_nested(1, identity_1d, |_| 0.0, &bad_live).is_err());
        let bad_frac = NestedConfig {
            termination_fraction: 1.5,
            ..NestedConfig::default()
        };
        assert!(run_nested(1, identity_1d, |_| 0.0, &bad_frac).is_err());
    }

    #[test]
    fn kernel_respects_the_hard_threshold() {
        let mut kernel = RandomWalkKernel::new();
        let mut rng = stream_rng(33, 0);
        // Indicator of the ball |u - c| < 0.2 around c = (0.4, 0.6).
        let center = [0.4, 0.6];
        let mut eval = |u: &[f64]| {
            let d2: f64 = u
                .iter()
                .zip(center.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2 < 0.04 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        };
        let start = [0.4, 0.6];
        for _ in 0..200 {
            let rep = kernel.explore(&start, 0.0, -0.5, 20, &mut eval, &mut rng);
            assert!(rep.log_lik > -0.5);
            let d2: f64 = rep
                .point
                .iter()
                .zip(center.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            assert!(d2 < 0.04, "kernel left the constraint set");
        }
    }

    #[test]
    fn weighted_quantile_walks_the_cumulative_weights() {
        let v = [1.0, 2.0, 3.0];
        let w = [1.0 / 3.0; 3];
        assert_eq!(weighted_quantile(&v, &w, 0.5).unwrap(), 2.0);
        assert_eq!(
            weighted_quantile(&[1.0, 2.0], &[0.9, 0.1], 0.5).unwrap(),
            1.0
        );
        // Order of the input must not matter.
        assert_eq!(
            weighted_quantile(&[2.0, 1.0], &[0.1, 0.9], 0.5).unwrap(),
            1.0
        );
        assert!(weighted_quantile(&[], &[], 0.5).is_err());
        assert!(weighted_quantile(&v, &w[..2], 0.5).is_err());
        assert!(weighted_quantile(&v, &w, 1.5).is_err());
    }

    #[test]
    fn diagnostics_render_as_csv() {
        let rows = vec![IterationDiagnostic {
            iteration: 1,
            ln_x: -0.01,
            log_lik: -3.5,
            acceptance: 0.45,
        }];
        let csv = diagnostics_csv(&rows);
        assert!(csv.starts_with("iteration,ln_x,log_lik,acceptance\n"));
        assert!(csv.contains("1,-0.01,-3.5,0.45"));
    }

    #[test]
    fn reflection_folds_points_back_into_the_cube() {
        assert_eq!(reflect_into_unit(0.3), 0.3);
        assert!((reflect_into_unit(1.2) - 0.8).abs() < 1e-15);
        assert!((reflect_into_unit(-0.2) - 0.2).abs() < 1e-15);
        assert!((reflect_into_unit(2.3) - 0.3).abs() < 1e-15);
        assert!((reflect_into_unit(-1.7) - 0.3).abs() < 1e-15);
    }
}
