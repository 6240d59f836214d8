//! Randomized law checks: algebraic identities the likelihoods, priors,
//! and decision helpers must satisfy for every valid input, not just the
//! hand-picked cases in the unit tests. Each property states the contract
//! directly; proptest hunts for counterexamples and shrinks any it finds.

use anomdiff::inference::{
    classify, confusion_matrix, estimate_alpha, f1_score, mae, model_posterior, CANDIDATE_MODELS,
};
use anomdiff::model::{
    dense_gaussian_loglik, fbm_autocov, fbm_increment_covariance, fbm_loglik_1d,
    sbm_increment_covariance, sbm_loglik_1d, FbmParams, ModelKind, SbmParams,
};
use anomdiff::nested::{run_nested, NestedConfig};
use anomdiff::priors::{log_prior_density, unit_to_params, AlphaPrior, PriorSpec};
use anomdiff::{Error, Result};

use proptest::prelude::*;

prop_compose! {
    /// Valid SBM parameters spanning sub- through superdiffusion, two
    /// decades of scale, moderate ageing, and the noise range the
    /// benchmark uses (exact zero included).
    fn sbm_params()(
        alpha in 0.05f64..1.95,
        log_sigma1 in -1.0f64..1.0,
        t0 in prop_oneof![Just(0.0), 0.0f64..50.0],
        dt in 0.5f64..2.0,
        sigma_mn in prop_oneof![Just(0.0), 0.01f64..2.0],
    ) -> SbmParams<f64> {
        SbmParams::new(alpha, 10f64.powf(log_sigma1), t0, dt, sigma_mn).unwrap()
    }
}

prop_compose! {
    fn fbm_params()(
        alpha in 0.05f64..1.95,
        log_sigma in -1.0f64..1.0,
        dt in 0.5f64..2.0,
        sigma_mn in prop_oneof![Just(0.0), 0.01f64..2.0],
    ) -> FbmParams<f64> {
        FbmParams::new(alpha, 10f64.powf(log_sigma), dt, sigma_mn).unwrap()
    }
}

fn increments(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-8.0f64..8.0, 2..=max_len)
}

fn label() -> impl Strategy<Value = ModelKind> {
    prop_oneof![Just(ModelKind::Sbm), Just(ModelKind::Fbm)]
}

/// |got - want| within a relative band plus an absolute floor for values
/// near zero.
fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs() + 1e-12
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn sbm_recursion_matches_the_dense_factorization(
        p in sbm_params(),
        dx in increments(200),
    ) {
        let fast = sbm_loglik_1d(&dx, &p).unwrap();
        let cov = sbm_increment_covariance(&p, dx.len()).unwrap();
        let dense = dense_gaussian_loglik(&dx, &cov).unwrap();
        prop_assert!(
            close(fast, dense, 1e-10),
            "recursion {fast} vs dense {dense} at alpha {}, n {}",
            p.alpha(),
            dx.len()
        );
    }

    #[test]
    fn fbm_recursion_matches_the_dense_factorization(
        p in fbm_params(),
        dx in increments(256),
    ) {
        let fast = fbm_loglik_1d(&dx, &p).unwrap();
        let cov = fbm_increment_covariance(&p, dx.len()).unwrap();
        let dense = dense_gaussian_loglik(&dx, &cov).unwrap();
        prop_assert!(
            close(fast, dense, 1e-8),
            "recursion {fast} vs dense {dense} at alpha {}, n {}",
            p.alpha(),
            dx.len()
        );
    }
}

proptest! {
    #[test]
    fn plain_brownian_motion_hides_ageing_and_the_model_label(
        log_sigma in -1.0f64..1.0,
        dt in 0.5f64..2.0,
        sigma_mn in prop_oneof![Just(0.0), 0.01f64..2.0],
        t0_a in 0.0f64..100.0,
        t0_b in 0.0f64..100.0,
        dx in increments(100),
    ) {
        // At alpha = 1 the step variances collapse to a constant, so the
        // ageing offset drops out of the SBM likelihood and the FBM
        // autocovariance loses every lag beyond the noise band: one
        // Brownian likelihood wearing three different labels.
        let sigma = 10f64.powf(log_sigma);
        let aged_a = SbmParams::new(1.0, sigma, t0_a, dt, sigma_mn).unwrap();
        let aged_b = SbmParams::new(1.0, sigma, t0_b, dt, sigma_mn).unwrap();
        let fractional = FbmParams::new(1.0, sigma, dt, sigma_mn).unwrap();
        let ll_a = sbm_loglik_1d(&dx, &aged_a).unwrap();
        let ll_b = sbm_loglik_1d(&dx, &aged_b).unwrap();
        let ll_f = fbm_loglik_1d(&dx, &fractional).unwrap();
        prop_assert!(close(ll_a, ll_b, 1e-10), "t0 {t0_a}: {ll_a} vs t0 {t0_b}: {ll_b}");
        prop_assert!(close(ll_a, ll_f, 1e-10), "sbm {ll_a} vs fbm {ll_f}");
    }

    #[test]
    fn measurement_noise_only_touches_adjacent_steps(
        p in sbm_params(),
        n in 2usize..40,
    ) {
        let cov = sbm_increment_covariance(&p, n).unwrap();
        let smn2 = p.sigma_mn() * p.sigma_mn();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = cov.get(i, j);
                prop_assert!(v <= 0.0, "positive off-diagonal {v} at ({i}, {j})");
                if i.abs_diff(j) == 1 {
                    prop_assert_eq!(v, -smn2);
                } else {
                    prop_assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn a_recorded_step_biases_the_next_one_backward(
        alpha in 0.05f64..1.95,
        log_sigma1 in -1.0f64..1.0,
        dt in 0.5f64..2.0,
        sigma_mn in 0.1f64..2.0,
        d in prop_oneof![-5.0f64..-0.5, 0.5f64..5.0],
        s in 0.01f64..0.5,
    ) {
        // Noise shared between consecutive increments makes a partial
        // retracement likelier than the same move continued; without
        // noise the steps are independent and the two are equally likely.
        let sigma1 = 10f64.powf(log_sigma1);
        let noisy = SbmParams::new(alpha, sigma1, 0.0, dt, sigma_mn).unwrap();
        let back = sbm_loglik_1d(&[d, -s * d], &noisy).unwrap();
        let forward = sbm_loglik_1d(&[d, s * d], &noisy).unwrap();
        prop_assert!(back > forward, "back {back} not favored over forward {forward}");

        let clean = SbmParams::new(alpha, sigma1, 0.0, dt, 0.0).unwrap();
        let back = sbm_loglik_1d(&[d, -s * d], &clean).unwrap();
        let forward = sbm_loglik_1d(&[d, s * d], &clean).unwrap();
        prop_assert_eq!(back, forward);
    }

    #[test]
    fn the_autocovariance_is_even_in_the_lag(
        p in fbm_params(),
        lag in 0i64..64,
    ) {
        prop_assert_eq!(fbm_autocov(&p, lag), fbm_autocov(&p, -lag));
    }

    #[test]
    fn likelihoods_ignore_a_global_sign_flip(
        sp in sbm_params(),
        fp in fbm_params(),
        dx in increments(100),
    ) {
        let flipped: Vec<f64> = dx.iter().map(|v| -v).collect();
        let s = sbm_loglik_1d(&dx, &sp).unwrap();
        let s_flip = sbm_loglik_1d(&flipped, &sp).unwrap();
        prop_assert!(close(s_flip, s, 1e-14), "sbm {s} vs flipped {s_flip}");
        let f = fbm_loglik_1d(&dx, &fp).unwrap();
        let f_flip = fbm_loglik_1d(&flipped, &fp).unwrap();
        prop_assert!(close(f_flip, f, 1e-14), "fbm {f} vs flipped {f_flip}");
    }

    #[test]
    fn interior_cube_points_map_to_finite_densities(
        u in proptest::array::uniform3(1e-9f64..=1.0 - 1e-9),
        model in label(),
        alpha_prior in prop_oneof![Just(AlphaPrior::Uniform), Just(AlphaPrior::Linear)],
        noise_max in prop_oneof![Just(1.0f64), Just(10.0f64)],
    ) {
        let spec = PriorSpec::new(model, alpha_prior, noise_max, 1.0).unwrap();
        let params = unit_to_params(&u, &spec).unwrap();
        prop_assert!(0.0 < params.alpha() && params.alpha() < 2.0);
        prop_assert!(params.amplitude() > 0.0);
        prop_assert!(0.0 < params.sigma_mn() && params.sigma_mn() < noise_max);
        let density = log_prior_density(&params, &spec).unwrap();
        prop_assert!(density.is_finite(), "log density {density} at {u:?}");
    }

    #[test]
    fn the_model_posterior_ignores_a_common_evidence_shift(
        lz0 in -500.0f64..500.0,
        lz1 in -500.0f64..500.0,
        shift in -100.0f64..100.0,
        w in 0.1f64..0.9,
    ) {
        let priors = [w, 1.0 - w];
        let base = model_posterior(&[lz0, lz1], &priors);
        let moved = model_posterior(&[lz0 + shift, lz1 + shift], &priors);
        prop_assert!((base.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for (b, m) in base.iter().zip(&moved) {
            prop_assert!((b - m).abs() <= 1e-12, "{b} vs {m} after shift {shift}");
        }
    }

    #[test]
    fn classification_survives_monotone_relabelling(
        q in prop_oneof![0.001f64..0.4999, 0.5001f64..0.999],
        transform in 0usize..4,
        a in 0.1f64..10.0,
        b in -5.0f64..5.0,
    ) {
        let probs = [q, 1.0 - q];
        let relabel = |x: f64| -> f64 {
            match transform {
                0 => a * x + b,
                1 => x * x * x,
                2 => x.exp(),
                _ => x.atan(),
            }
        };
        let relabelled = [relabel(probs[0]), relabel(probs[1])];
        prop_assert_eq!(classify(&relabelled), classify(&probs));
    }

    #[test]
    fn the_mixed_estimate_stays_between_the_medians(
        m0 in 0.0f64..2.0,
        m1 in 0.0f64..2.0,
        p in 0.0f64..=1.0,
    ) {
        let estimate = estimate_alpha(&[m0, m1], &[p, 1.0 - p]);
        prop_assert!(estimate >= m0.min(m1) - 1e-12, "{estimate} below min({m0}, {m1})");
        prop_assert!(estimate <= m0.max(m1) + 1e-12, "{estimate} above max({m0}, {m1})");
    }

    #[test]
    fn the_f1_score_is_the_confusion_matrix_trace_rate(
        pairs in proptest::collection::vec((label(), label()), 1..200),
    ) {
        let assigned: Vec<ModelKind> = pairs.iter().map(|(a, _)| *a).collect();
        let truth: Vec<ModelKind> = pairs.iter().map(|(_, g)| *g).collect();
        let counts = confusion_matrix(&assigned, &truth);
        let total: usize = counts.iter().flatten().sum();
        prop_assert_eq!(total, pairs.len());
        // Row totals partition the inputs by generating model.
        for (row, model) in counts.iter().zip(CANDIDATE_MODELS) {
            let generated = truth.iter().filter(|&&g| g == model).count();
            prop_assert_eq!(row.iter().sum::<usize>(), generated);
        }
        let trace_rate = (counts[0][0] + counts[1][1]) as f64 / total as f64;
        let (f1, stderr) = f1_score(&assigned, &truth);
        prop_assert_eq!(f1, trace_rate);
        prop_assert_eq!(stderr, (trace_rate * (1.0 - trace_rate) / total as f64).sqrt());
    }

    #[test]
    fn the_mean_absolute_error_vanishes_only_on_perfect_predictions(
        truth in proptest::collection::vec(0.001f64..2.0, 1..100),
        index in any::<prop::sample::Index>(),
        offset in prop_oneof![-1.0f64..-1e-6, 1e-6f64..1.0],
    ) {
        let (exact, spread) = mae(&truth, &truth).unwrap();
        prop_assert_eq!(exact, 0.0);
        prop_assert_eq!(spread, 0.0);

        let mut nudged = truth.clone();
        let k = index.index(nudged.len());
        nudged[k] += offset;
        let (error, spread) = mae(&nudged, &truth).unwrap();
        prop_assert!(error > 0.0, "zero error after nudging entry {k} by {offset}");
        prop_assert!(error.is_finite() && spread.is_finite() && spread >= 0.0);
    }
}

fn unit_interval(u: &[f64]) -> Result<f64> {
    if u[0] <= 0.0 || u[0] >= 1.0 {
        return Err(Error::BoundaryCoordinate {
            index: 0,
            value: u[0],
        });
    }
    Ok(u[0])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn nested_bookkeeping_is_exact_for_any_seed(seed in any::<u64>()) {
        let cfg = NestedConfig {
            n_live: 50,
            steps_per_replacement: 20,
            seed,
            record_diagnostics: true,
            ..NestedConfig::default()
        };
        let res = run_nested(
            1,
            unit_interval,
            |&theta: &f64| -0.5 * ((theta - 0.4) / 0.1).powi(2),
            &cfg,
        )
        .unwrap();
        prop_assert!(res.log_z.is_finite());

        // Normalized posterior weights sum to one.
        let total: f64 = res.samples.iter().map(|s| s.weight).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12, "weights sum to {total}");
        for s in &res.samples {
            prop_assert!(s.weight.is_finite() && s.weight >= 0.0);
        }

        // Deterministic shrinkage: ln X after iteration k is exactly
        // -k / n_live, and the retired likelihoods never decrease.
        prop_assert_eq!(res.diagnostics.len(), res.iterations);
        for (k, d) in res.diagnostics.iter().enumerate() {
            prop_assert_eq!(d.iteration, k + 1);
            let expected = -((k + 1) as f64) / 50.0;
            prop_assert!((d.ln_x - expected).abs() <= 1e-12);
        }
        for pair in res.diagnostics.windows(2) {
            prop_assert!(pair[1].log_lik >= pair[0].log_lik);
        }
    }
}
