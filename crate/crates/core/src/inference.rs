//! Decision layer: turn per-model evidences into model probabilities, a
//! weighted point estimate of the anomalous exponent, a hard classification,
//! and the benchmark metrics (MAE, classification score, confusion counts).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{loglik_multidim, ModelKind, ModelParams};
use crate::nested::{run_nested, weighted_quantile, NestedConfig, NestedResult};
use crate::priors::{unit_to_params, AlphaPrior, PriorSpec, PRIOR_DIM};
use crate::seeds::{child_seed, string_tag};
use crate::simulate::{GroundTruth, TrajectoryRecord};

/// The two models competing for each trajectory, in probability order.
pub const CANDIDATE_MODELS: [ModelKind; 2] = [ModelKind::Sbm, ModelKind::Fbm];

/// Posterior model probabilities from per-model log-evidences, computed as a
/// shifted softmax of logZ + ln(prior) so arbitrarily large evidence gaps
/// never overflow.
///
/// Panics if the slices differ in length, are empty, or the priors are not a
/// probability vector.
pub fn model_posterior(log_z: &[f64], model_priors: &[f64]) -> Vec<f64> {
    assert_eq!(log_z.len(), model_priors.len(), "one prior per model");
    assert!(!log_z.is_empty(), "at least one model");
    let prior_sum: f64 = model_priors.iter().sum();
    assert!(
        model_priors.iter().all(|&p| p > 0.0) && (prior_sum - 1.0).abs() < 1e-9,
        "model priors must be positive and sum to 1"
    );
    let scores: Vec<f64> = log_z
        .iter()
        .zip(model_priors)
        .map(|(z, p)| z + p.ln())
        .collect();
    let top = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let unnorm: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
    let total: f64 = unnorm.iter().sum();
    unnorm.into_iter().map(|u| u / total).collect()
}

/// Model-probability-weighted combination of the per-model posterior
/// medians: the point estimate reported for the anomalous exponent.
pub fn estimate_alpha(medians: &[f64], probs: &[f64]) -> f64 {
    assert_eq!(medians.len(), probs.len(), "one median per model");
    medians.iter().zip(probs).map(|(m, p)| m * p).sum()
}

/// Hard assignment: the model with the highest posterior probability, ties
/// broken toward the earlier entry of [`CANDIDATE_MODELS`] (SBM).
pub fn classify(probs: &[f64]) -> ModelKind {
    assert_eq!(probs.len(), CANDIDATE_MODELS.len());
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate().skip(1) {
        if p > probs[best] {
            best = i;
        }
    }
    CANDIDATE_MODELS[best]
}

/// Mean absolute error and its standard error (sample standard deviation of
/// the absolute errors over sqrt(n)).
pub fn mae(predictions: &[f64], ground_truths: &[f64]) -> Result<(f64, f64)> {
    if predictions.is_empty() {
        return Err(Error::EmptyInput("mean absolute error"));
    }
    if predictions.len() != ground_truths.len() {
        return Err(Error::LengthMismatch(format!(
            "{} predictions vs {} ground truths",
            predictions.len(),
            ground_truths.len()
        )));
    }
    let n = predictions.len() as f64;
    let abs_errors: Vec<f64> = predictions
        .iter()
        .zip(ground_truths)
        .map(|(p, g)| (p - g).abs())
        .collect();
    let mean = abs_errors.iter().sum::<f64>() / n;
    let stderr = if predictions.len() < 2 {
        0.0
    } else {
        let var = abs_errors
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    };
    Ok((mean, stderr))
}

/// Fraction of trajectories assigned to their generating model, with the
/// Bernoulli standard error sqrt(p(1-p)/n).
///
/// Panics on empty or mismatched inputs.
pub fn f1_score(assignments: &[ModelKind], ground_truths: &[ModelKind]) -> (f64, f64) {
    assert!(!assignments.is_empty(), "at least one trajectory");
    assert_eq!(assignments.len(), ground_truths.len());
    let n = assignments.len() as f64;
    let correct = assignments
        .iter()
        .zip(ground_truths)
        .filter(|(a, g)| a == g)
        .count() as f64;
    let p = correct / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

/// 2x2 confusion counts: rows are the generating model, columns the
/// assignment, both in [`CANDIDATE_MODELS`] order.
///
/// Panics on empty/mismatched inputs or a CTRW label (CTRW is never a
/// classification target; its campaigns report assignment fractions instead).
pub fn confusion_matrix(
    assignments: &[ModelKind],
    ground_truths: &[ModelKind],
) -> [[usize; 2]; 2] {
    assert!(!assignments.is_empty(), "at least one trajectory");
    assert_eq!(assignments.len(), ground_truths.len());
    let index = |m: ModelKind| -> usize {
        CANDIDATE_MODELS
            .iter()
            .position(|&c| c == m)
            .expect("only SBM/FBM labels enter the confusion matrix")
    };
    let mut counts = [[0usize; 2]; 2];
    for (a, g) in assignments.iter().zip(ground_truths) {
        counts[index(*g)][index(*a)] += 1;
    }
    counts
}

/// Expected absolute error of a draw uniform on (0, 2) against a fixed
/// truth: the benchmark floor an uninformative posterior converges to.
pub fn uniform_posterior_mae_bound(alpha_gt: f64) -> f64 {
    ((alpha_gt - 1.0) * (alpha_gt - 1.0) + 1.0) / 2.0
}

/// Prior and sampler settings shared by every trajectory of a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferenceSettings {
    pub alpha_prior: AlphaPrior,
    /// Upper end of the uniform prior on the noise amplitude.
    pub noise_max: f64,
    /// Template nested-sampling configuration; its seed field is replaced by
    /// a per-(trajectory, model) derived seed.
    pub nested: NestedConfig,
}

impl InferenceSettings {
    pub fn new(alpha_prior: AlphaPrior, noise_max: f64, nested: NestedConfig) -> Self {
        Self {
            alpha_prior,
            noise_max,
            nested,
        }
    }
}

/// Everything inferred about one trajectory: the full per-model nested runs
/// plus the derived decision quantities.
#[derive(Debug, Clone)]
pub struct TrajectoryInference {
    pub id: String,
    /// One nested run per entry of [`CANDIDATE_MODELS`].
    pub results: Vec<NestedResult<ModelParams<f64>>>,
    /// Posterior medians of (alpha, amplitude, sigma_mn) per model.
    pub alpha_medians: Vec<f64>,
    pub amplitude_medians: Vec<f64>,
    pub sigma_mn_medians: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub assigned: ModelKind,
    pub alpha_estimate: f64,
    /// True when |Delta logZ| < 2 x combined stderr: the assignment is
    /// within sampler noise of a coin flip.
    pub ambiguous: bool,
}

/// Flat, serializable summary of a [`TrajectoryInference`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceRecord {
    pub schema_version: u32,
    pub id: String,
    pub fits: Vec<ModelFitSummary>,
    pub probabilities: Vec<f64>,
    pub assigned: ModelKind,
    pub alpha_estimate: f64,
    pub ambiguous: bool,
    pub ground_truth_model: Option<ModelKind>,
    pub ground_truth: Option<GroundTruth<f64>>,
}

/// Per-model scalar outputs kept in serialized inference records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFitSummary {
    pub model: ModelKind,
    pub log_z: f64,
    pub log_z_stderr: f64,
    pub information: f64,
    pub iterations: usize,
    pub alpha_median: f64,
    pub amplitude_median: f64,
    pub sigma_mn_median: f64,
}

impl TrajectoryInference {
    /// Collapses the full nested runs into the serializable summary,
    /// attaching the generating model and parameters when known.
    pub fn to_record(
        &self,
        ground_truth_model: Option<ModelKind>,
        ground_truth: Option<GroundTruth<f64>>,
    ) -> InferenceRecord {
        let fits = CANDIDATE_MODELS
            .iter()
            .enumerate()
            .map(|(i, &model)| ModelFitSummary {
                model,
                log_z: self.results[i].log_z,
                log_z_stderr: self.results[i].log_z_stderr,
                information: self.results[i].information,
                iterations: self.results[i].iterations,
                alpha_median: self.alpha_medians[i],
                amplitude_median: self.amplitude_medians[i],
                sigma_mn_median: self.sigma_mn_medians[i],
            })
            .collect();
        InferenceRecord {
            schema_version: crate::simulate::TRAJECTORY_SCHEMA_VERSION,
            id: self.id.clone(),
            fits,
            probabilities: self.probabilities.clone(),
            assigned: self.assigned,
            alpha_estimate: self.alpha_estimate,
            ambiguous: self.ambiguous,
            ground_truth_model,
            ground_truth,
        }
    }
}

/// Seed for the nested run of `model_index` on trajectory `id`, derived so
/// every (trajectory, model) job is an independent reproducible stream.
pub fn job_seed(master_seed: u64, id: &str, model_index: usize) -> u64 {
    child_seed(child_seed(master_seed, string_tag(id)), model_index as u64)
}

/// Runs the full two-model analysis on one trajectory: a nested-sampling
/// evidence per candidate model under the given priors, model probabilities
/// with equal model priors, the weighted-median exponent estimate, and the
/// hard assignment.
///
/// A likelihood evaluation that fails numerically (e.g. a covariance losing
/// positive definiteness in an extreme parameter corner) counts as zero
/// likelihood rather than aborting the run.
pub fn infer_trajectory(
    traj: &TrajectoryRecord<f64>,
    settings: &InferenceSettings,
    master_seed: u64,
) -> Result<TrajectoryInference> {
    traj.validate()?;
    let series = traj.increment_series()?;

    let mut results = Vec::with_capacity(CANDIDATE_MODELS.len());
    let mut alpha_medians = Vec::new();
    let mut amplitude_medians = Vec::new();
    let mut sigma_mn_medians = Vec::new();

    for (model_index, &model) in CANDIDATE_MODELS.iter().enumerate() {
        let spec = PriorSpec::new(model, settings.alpha_prior, settings.noise_max, traj.dt)?;
        let mut cfg = settings.nested;
        cfg.seed = job_seed(master_seed, &traj.id, model_index);
        let result = run_nested(
            PRIOR_DIM,
            |u| unit_to_params(u, &spec),
            |p| loglik_multidim(&series, p).unwrap_or(f64::NEG_INFINITY),
            &cfg,
        )?;

        let weights: Vec<f64> = result.samples.iter().map(|s| s.weight).collect();
        let alphas: Vec<f64> = result.samples.iter().map(|s| s.params.alpha()).collect();
        let amplitudes: Vec<f64> = result
            .samples
            .iter()
            .map(|s| s.params.amplitude())
            .collect();
        let noises: Vec<f64> = result.samples.iter().map(|s| s.params.sigma_mn()).collect();
        alpha_medians.push(weighted_quantile(&alphas, &weights, 0.5)?);
        amplitude_medians.push(weighted_quantile(&amplitudes, &weights, 0.5)?);
        sigma_mn_medians.push(weighted_quantile(&noises, &weights, 0.5)?);
        results.push(result);
    }

    let log_zs: Vec<f64> = results.iter().map(|r| r.log_z).collect();
    let equal = vec![1.0 / CANDIDATE_MODELS.len() as f64; CANDIDATE_MODELS.len()];
    let probabilities = model_posterior(&log_zs, &equal);
    let assigned = classify(&probabilities);
    let alpha_estimate = estimate_alpha(&alpha_medians, &probabilities);
    let combined_se = (results[0].log_z_stderr.powi(2) + results[1].log_z_stderr.powi(2)).sqrt();
    let ambiguous = (log_zs[0] - log_zs[1]).abs() < 2.0 * combined_se;

    Ok(TrajectoryInference {
        id: traj.id.clone(),
        results,
        alpha_medians,
        amplitude_medians,
        sigma_mn_medians,
        probabilities,
        assigned,
        alpha_estimate,
        ambiguous,
    })
}

/// Campaign-wide context attached to a serialized benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkMetadata {
    pub alpha_prior: AlphaPrior,
    pub master_seed: u64,
    pub dims: usize,
    pub trajectories_per_cell: usize,
}

/// Aggregates for one (alpha, N, sigma_mn, model) cell of a benchmark grid.
///
/// `f1`/`f1_stderr` score the cell's (alpha, N, sigma_mn) group with all of
/// its models pooled, so the group's rows repeat the same value; campaigns
/// whose generating model is outside [`CANDIDATE_MODELS`] (CTRW) have no
/// correct-model notion and leave them unset. `count` is the number of
/// trajectories actually aggregated, so a shortfall against the configured
/// per-cell count is visible in the report itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkCell {
    /// Ground-truth exponent of the cell, or "uniform" for drawn exponents.
    pub alpha_label: String,
    pub n_points: usize,
    pub sigma_mn: f64,
    pub model: ModelKind,
    pub count: usize,
    pub mae: f64,
    pub mae_stderr: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1_stderr: Option<f64>,
    /// Assignment counts in [`CANDIDATE_MODELS`] order: the cell's row of
    /// the confusion table.
    pub assigned: [usize; 2],
    /// `assigned[0] / count`, the headline misspecification metric.
    pub sbm_fraction: f64,
}

/// A full benchmark campaign: one cell of aggregates per grid point.
///
/// Serializes to JSON with the complete detail and to CSV with one row per
/// cell (optional columns left empty where undefined).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkReport {
    pub schema_version: u32,
    pub metadata: BenchmarkMetadata,
    pub cells: Vec<BenchmarkCell>,
}

impl BenchmarkReport {
    pub fn new(metadata: BenchmarkMetadata, cells: Vec<BenchmarkCell>) -> Result<Self> {
        let report = Self {
            schema_version: crate::simulate::TRAJECTORY_SCHEMA_VERSION,
            metadata,
            cells,
        };
        report.validate()?;
        Ok(report)
    }

    /// Checks the structural invariants, e.g. after deserializing a report
    /// from a file: assignment counts resolve the full cell, scores are
    /// probabilities, errors are nonnegative.
    pub fn validate(&self) -> Result<()> {
        for cell in &self.cells {
            let label = format!(
                "cell ({}, N={}, sigma_mn={}, {})",
                cell.alpha_label, cell.n_points, cell.sigma_mn, cell.model
            );
            if cell.count == 0 {
                return Err(Error::EmptyInput("benchmark cell without trajectories"));
            }
            if cell.assigned[0] + cell.assigned[1] != cell.count {
                return Err(Error::LengthMismatch(format!(
                    "{label}: assignments {} + {} != count {}",
                    cell.assigned[0], cell.assigned[1], cell.count
                )));
            }
            if !(cell.mae.is_finite() && cell.mae >= 0.0)
                || !(cell.mae_stderr.is_finite() && cell.mae_stderr >= 0.0)
            {
                return Err(Error::InvalidParameter(format!(
                    "{label}: MAE {} +- {} is not a nonnegative finite pair",
                    cell.mae, cell.mae_stderr
                )));
            }
            if let Some(f1) = cell.f1 {
                if !(0.0..=1.0).contains(&f1) {
                    return Err(Error::InvalidParameter(format!(
                        "{label}: F1 {f1} outside [0, 1]"
                    )));
                }
            }
            let expected_fraction = cell.assigned[0] as f64 / cell.count as f64;
            if (cell.sbm_fraction - expected_fraction).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "{label}: sbm_fraction {} disagrees with counts {}/{}",
                    cell.sbm_fraction, cell.assigned[0], cell.count
                )));
            }
        }
        Ok(())
    }

    /// One CSV row per grid cell; F1 columns are empty for cells without a
    /// correct-model notion.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "alpha,n,sigma_mn,model,count,mae,mae_stderr,f1,f1_stderr,\
             assigned_sbm,assigned_fbm,sbm_fraction\n",
        );
        for c in &self.cells {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                c.alpha_label,
                c.n_points,
                c.sigma_mn,
                c.model,
                c.count,
                c.mae,
                c.mae_stderr,
                opt(c.f1),
                opt(c.f1_stderr),
                c.assigned[0],
                c.assigned[1],
                c.sbm_fraction
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SbmParams;
    use crate::simulate::{add_measurement_noise, simulate_sbm};

    #[test]
    fn model_posterior_reproduces_hand_computed_odds() {
        let equal = model_posterior(&[3.0, 3.0], &[0.5, 0.5]);
        assert!((equal[0] - 0.5).abs() < 1e-15);

        let three_to_one = model_posterior(&[3.0_f64.ln(), 0.0], &[0.5, 0.5]);
        assert!((three_to_one[0] - 0.75).abs() < 1e-12);
        assert!((three_to_one[1] - 0.25).abs() < 1e-12);

        let lopsided = model_posterior(&[1e4, 0.0], &[0.5, 0.5]);
        assert_eq!(lopsided[0], 1.0);
        assert!(lopsided[1] >= 0.0 && lopsided[1] < 1e-300);
        assert!(lopsided.iter().all(|p| p.is_finite()));
    }

    #[test]
    fn model_posterior_is_shift_invariant() {
        let base = model_posterior(&[-1.2, 2.7], &[0.5, 0.5]);
        let shifted = model_posterior(&[-1.2 + 12345.0, 2.7 + 12345.0], &[0.5, 0.5]);
        for (a, b) in base.iter().zip(&shifted) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn model_posterior_folds_in_unequal_priors() {
        let probs = model_posterior(&[0.0, 0.0], &[0.9, 0.1]);
        assert!((probs[0] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn alpha_estimate_is_the_probability_weighted_median_mix() {
        assert!((estimate_alpha(&[0.8, 1.2], &[0.75, 0.25]) - 0.9).abs() < 1e-15);
        assert_eq!(estimate_alpha(&[0.8, 1.2], &[1.0, 0.0]), 0.8);
        let m = 1.37;
        assert!((estimate_alpha(&[m, m], &[0.3, 0.7]) - m).abs() < 1e-15);
    }

    #[test]
    fn classification_is_argmax_with_sbm_tie_break() {
        assert_eq!(classify(&[0.6, 0.4]), ModelKind::Sbm);
        assert_eq!(classify(&[0.4, 0.6]), ModelKind::Fbm);
        assert_eq!(classify(&[0.5, 0.5]), ModelKind::Sbm);
    }

    #[test]
    fn mae_matches_hand_arithmetic() {
        let (value, stderr) = mae(&[1.0, 1.5], &[1.2, 1.2]).unwrap();
        assert!((value - 0.25).abs() < 1e-15);
        // abs errors 0.2 and 0.3: sd = 0.0707..., se = sd / sqrt(2) = 0.05.
        assert!((stderr - 0.05).abs() < 1e-12);

        let (zero, se) = mae(&[0.7, 1.9], &[0.7, 1.9]).unwrap();
        assert_eq!(zero, 0.0);
        assert_eq!(se, 0.0);

        assert!(mae(&[1.0], &[1.0, 2.0]).is_err());
        assert!(mae(&[], &[]).is_err());
    }

    #[test]
    fn classification_score_has_the_bernoulli_error_bar() {
        let mut assignments = vec![ModelKind::Sbm; 200];
        for a in assignments.iter_mut().take(50) {
            *a = ModelKind::Fbm;
        }
        let truths = vec![ModelKind::Sbm; 200];
        let (p, se) = f1_score(&assignments, &truths);
        assert!((p - 0.75).abs() < 1e-15);
        assert!((se - (0.75 * 0.25 / 200.0_f64).sqrt()).abs() < 1e-15);

        let (perfect, zero) = f1_score(&truths, &truths);
        assert_eq!(perfect, 1.0);
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn confusion_counts_partition_by_ground_truth() {
        let truths = [
            ModelKind::Sbm,
            ModelKind::Sbm,
            ModelKind::Fbm,
            ModelKind::Fbm,
            ModelKind::Fbm,
        ];
        let assignments = [
            ModelKind::Sbm,
            ModelKind::Fbm,
            ModelKind::Fbm,
            ModelKind::Fbm,
            ModelKind::Sbm,
        ];
        let counts = confusion_matrix(&assignments, &truths);
        assert_eq!(counts, [[1, 1], [1, 2]]);
        assert_eq!(counts[0][0] + counts[0][1], 2);
        assert_eq!(counts[1][0] + counts[1][1], 3);

        // Score recomputed from the trace agrees with f1_score.
        let trace = (counts[0][0] + counts[1][1]) as f64;
        let total = truths.len() as f64;
        let (p, _) = f1_score(&assignments, &truths);
        assert!((trace / total - p).abs() < 1e-15);
    }

    #[test]
    fn uninformative_posterior_floor_matches_brute_force() {
        for gt in [0.2, 1.0, 1.8] {
            let bound = uniform_posterior_mae_bound(gt);
            // Midpoint rule over a uniform on (0, 2).
            let m = 2_000_000;
            let sum: f64 = (0..m)
                .map(|i| {
                    let a = 2.0 * (i as f64 + 0.5) / m as f64;
                    (a - gt).abs()
                })
                .sum();
            assert!((sum / m as f64 - bound).abs() < 1e-3, "gt {gt}");
        }
        assert!((uniform_posterior_mae_bound(0.2) - 0.82).abs() < 1e-15);
    }

    fn short_brownian(seed: u64) -> TrajectoryRecord<f64> {
        let params = SbmParams::<f64>::new(1.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        let clean = simulate_sbm(&params, 32, 1, seed).unwrap();
        add_measurement_noise(&clean, 0.0, seed).unwrap()
    }

    fn quick_settings() -> InferenceSettings {
        InferenceSettings::new(
            AlphaPrior::Uniform,
            1.0,
            NestedConfig {
                n_live: 50,
                steps_per_replacement: 20,
                ..NestedConfig::default()
            },
        )
    }

    #[test]
    fn trajectory_inference_yields_a_coherent_decision() {
        let traj = short_brownian(424242);
        let inf = infer_trajectory(&traj, &quick_settings(), 7).unwrap();

        assert_eq!(inf.results.len(), 2);
        let psum: f64 = inf.probabilities.iter().sum();
        assert!((psum - 1.0).abs() < 1e-12);
        assert!(inf.probabilities.iter().all(|&p| p >= 0.0));
        assert!(inf.alpha_estimate > 0.0 && inf.alpha_estimate < 2.0);
        let lo = inf.alpha_medians[0].min(inf.alpha_medians[1]);
        let hi = inf.alpha_medians[0].max(inf.alpha_medians[1]);
        assert!(inf.alpha_estimate >= lo && inf.alpha_estimate <= hi);
        assert!(CANDIDATE_MODELS.contains(&inf.assigned));

        let record = inf.to_record(Some(ModelKind::Sbm), Some(traj.ground_truth));
        assert_eq!(record.fits.len(), 2);
        assert_eq!(record.fits[0].model, ModelKind::Sbm);
        let json = serde_json::to_string(&record).unwrap();
        let back: InferenceRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
    }

    #[test]
    fn trajectory_inference_is_reproducible_and_seed_sensitive() {
        let traj = short_brownian(99);
        let settings = quick_settings();
        let a = infer_trajectory(&traj, &settings, 11).unwrap();
        let b = infer_trajectory(&traj, &settings, 11).unwrap();
        assert_eq!(a.results[0].log_z, b.results[0].log_z);
        assert_eq!(a.results[1].log_z, b.results[1].log_z);
        assert_eq!(a.alpha_estimate, b.alpha_estimate);

        let c = infer_trajectory(&traj, &settings, 12).unwrap();
        assert_ne!(a.results[0].log_z, c.results[0].log_z);
    }

    #[test]
    fn job_seeds_separate_models_and_trajectories() {
        let s = job_seed(5, "traj-0001", 0);
        assert_ne!(s, job_seed(5, "traj-0001", 1));
        assert_ne!(s, job_seed(5, "traj-0002", 0));
        assert_ne!(s, job_seed(6, "traj-0001", 0));
        assert_eq!(s, job_seed(5, "traj-0001", 0));
    }

    fn sample_report() -> BenchmarkReport {
        let metadata = BenchmarkMetadata {
            alpha_prior: AlphaPrior::Uniform,
            master_seed: 42,
            dims: 2,
            trajectories_per_cell: 10,
        };
        let cells = vec![
            BenchmarkCell {
                alpha_label: "0.4".into(),
                n_points: 200,
                sigma_mn: 0.0,
                model: ModelKind::Sbm,
                count: 10,
                mae: 0.12,
                mae_stderr: 0.02,
                f1: Some(0.85),
                f1_stderr: Some(0.08),
                assigned: [9, 1],
                sbm_fraction: 0.9,
            },
            BenchmarkCell {
                alpha_label: "0.4".into(),
                n_points: 200,
                sigma_mn: 0.0,
                model: ModelKind::Ctrw,
                count: 10,
                mae: 0.30,
                mae_stderr: 0.05,
                f1: None,
                f1_stderr: None,
                assigned: [8, 2],
                sbm_fraction: 0.8,
            },
        ];
        BenchmarkReport::new(metadata, cells).unwrap()
    }

    #[test]
    fn benchmark_report_round_trips_and_renders_csv() {
        let report = sample_report();
        let json = serde_json::to_string(&report).unwrap();
        let back: BenchmarkReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        back.validate().unwrap();

        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + report.cells.len());
        assert!(lines[0].starts_with("alpha,n,sigma_mn,model,count,mae"));
        assert!(lines[1].starts_with("0.4,200,0,sbm,10,0.12,0.02,0.85,0.08,9,1,0.9"));
        // The CTRW row leaves both F1 columns empty.
        assert!(lines[2].contains(",ctrw,10,0.3,0.05,,,8,2,0.8"));
    }

    #[test]
    fn benchmark_report_rejects_inconsistent_cells() {
        let mut bad_counts = sample_report();
        bad_counts.cells[0].assigned = [9, 2];
        assert!(bad_counts.validate().is_err());

        let mut bad_f1 = sample_report();
        bad_f1.cells[0].f1 = Some(1.2);
        assert!(bad_f1.validate().is_err());

        let mut bad_fraction = sample_report();
        bad_fraction.cells[1].sbm_fraction = 0.5;
        assert!(bad_fraction.validate().is_err());

        let mut empty_cell = sample_report();
        empty_cell.cells[0].count = 0;
        empty_cell.cells[0].assigned = [0, 0];
        assert!(empty_cell.validate().is_err());
    }
}
