//! End-to-end checks of the two-model decision pipeline on short synthetic
//! trajectories: strong anomalous diffusion must sort into the right model,
//! plain Brownian motion must stay genuinely undecided, and the exponent
//! estimate must beat the uninformative floor by a wide margin.

use anomdiff::inference::{
    infer_trajectory, mae, uniform_posterior_mae_bound, InferenceSettings,
};
use anomdiff::model::ModelKind;
use anomdiff::nested::NestedConfig;
use anomdiff::priors::AlphaPrior;
use anomdiff::simulate::{add_measurement_noise, simulate_fbm, simulate_sbm};
use anomdiff::{FbmParams, SbmParams, TrajectoryRecord};

fn noise_free(
    settings_seed: u64,
    model: ModelKind,
    alpha: f64,
    n: usize,
    dims: usize,
) -> TrajectoryRecord {
    let clean = match model {
        ModelKind::Sbm => {
            let p = SbmParams::new(alpha, 1.0, 0.0, 1.0, 0.0).unwrap();
            simulate_sbm(&p, n, dims, settings_seed).unwrap()
        }
        ModelKind::Fbm => {
            let p = FbmParams::new(alpha, 1.0, 1.0, 0.0).unwrap();
            simulate_fbm(&p, n, dims, settings_seed).unwrap()
        }
        ModelKind::Ctrw => unreachable!("not generated here"),
    };
    add_measurement_noise(&clean, 0.0, settings_seed).unwrap()
}

fn settings(n_live: usize) -> InferenceSettings {
    InferenceSettings::new(
        AlphaPrior::Uniform,
        1.0,
        NestedConfig {
            n_live,
            ..NestedConfig::default()
        },
    )
}

#[test]
fn strong_anomalies_classify_correctly_and_alpha_is_recovered() {
    let alpha = 0.3;
    let cfg = settings(50);
    let mut correct = 0;
    let mut estimates = Vec::new();
    let mut truths = Vec::new();
    for k in 0..5u64 {
        for model in [ModelKind::Sbm, ModelKind::Fbm] {
            let traj = noise_free(1000 + k, model, alpha, 100, 2);
            let inf = infer_trajectory(&traj, &cfg, 42).unwrap();
            if inf.assigned == model {
                correct += 1;
            }
            estimates.push(inf.alpha_estimate);
            truths.push(alpha);
        }
    }
    assert!(correct >= 8, "only {correct}/10 classified correctly");

    let (err, _) = mae(&estimates, &truths).unwrap();
    let floor = uniform_posterior_mae_bound(alpha);
    assert!(
        err < 0.5 * floor,
        "MAE {err} should be far below the uninformative floor {floor}"
    );
    assert!(err < 0.25, "MAE {err} too large for N = 100");
}

#[test]
fn brownian_motion_is_statistically_undecidable() {
    // At alpha = 1 the two models coincide, so the evidence gap is pure
    // sampler noise: probabilities hover around 1/2 and never hit certainty.
    let cfg = settings(100);
    let mut p_sbm = Vec::new();
    let mut ambiguous = 0;
    for k in 0..8u64 {
        let traj = noise_free(2000 + k, ModelKind::Sbm, 1.0, 100, 1);
        let inf = infer_trajectory(&traj, &cfg, 7).unwrap();
        assert!(
            inf.probabilities[0] > 0.02 && inf.probabilities[0] < 0.98,
            "trajectory {k}: decisive probability {} at the degenerate point",
            inf.probabilities[0]
        );
        p_sbm.push(inf.probabilities[0]);
        if inf.ambiguous {
            ambiguous += 1;
        }
    }
    let mean: f64 = p_sbm.iter().sum::<f64>() / p_sbm.len() as f64;
    assert!(
        mean > 0.25 && mean < 0.75,
        "mean SBM probability {mean} drifted from 1/2"
    );
    assert!(
        ambiguous >= 4,
        "only {ambiguous}/8 flagged ambiguous at the degenerate point"
    );
}

#[test]
fn noise_amplitude_is_recovered_when_present() {
    let clean = {
        let p = SbmParams::new(1.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        simulate_sbm(&p, 200, 1, 555).unwrap()
    };
    let noisy = add_measurement_noise(&clean, 0.5, 556).unwrap();
    let inf = infer_trajectory(&noisy, &settings(100), 77).unwrap();
    // The SBM fit's noise median should land near 0.5, nowhere near the
    // prior edges.
    let sigma_mn = inf.sigma_mn_medians[0];
    assert!(
        sigma_mn > 0.25 && sigma_mn < 0.75,
        "posterior noise median {sigma_mn}, truth 0.5"
    );
    // And the exponent should still be recovered.
    assert!(
        (inf.alpha_estimate - 1.0).abs() < 0.35,
        "alpha estimate {}",
        inf.alpha_estimate
    );
}
