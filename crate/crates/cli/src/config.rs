//! Run configuration: the documented TOML keys, their validation, and the
//! canonical hash used for provenance and the resume cache.

use std::fs;
use std::path::Path;

use anomdiff::model::ModelKind;
use anomdiff::nested::NestedConfig;
use anomdiff::priors::AlphaPrior;
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Top-level configuration. Every key has a default, so a file states only
/// what it changes; unknown keys are rejected to catch typos early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; every per-(trajectory, model) stream derives from it.
    pub seed: u64,
    /// Worker threads for inference jobs; 0 means all available cores.
    pub workers: usize,
    /// Spatial dimensions of generated trajectories (1 to 3).
    pub dims: usize,
    /// Sampling interval of the observation grid.
    pub dt: f64,
    pub dataset: DatasetConfig,
    pub prior: PriorConfig,
    pub nested: NestedSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            workers: 0,
            dims: 2,
            dt: 1.0,
            dataset: DatasetConfig::default(),
            prior: PriorConfig::default(),
            nested: NestedSection::default(),
        }
    }
}

/// The `[dataset]` table: which grid of trajectories to generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    /// Generating processes; the grid has one cell per
    /// (model, exponent, N, sigma_mn) combination.
    pub models: Vec<ModelKind>,
    /// "grid" takes exponents from `alpha_values`; "uniform" draws each
    /// trajectory's exponent uniformly on (0, 2).
    pub alpha_mode: AlphaModeConfig,
    pub alpha_values: Vec<f64>,
    /// Trajectory lengths N (positions run 0..=N).
    pub n_points: Vec<usize>,
    /// Measurement-noise levels.
    pub sigma_mn: Vec<f64>,
    /// Trajectories per grid cell. The default is desk-scale; the reference
    /// campaigns use 100 (MAE/F1 grids) and 1000 (prior comparison).
    pub trajectories_per_cell: usize,
    /// CTRW operational time step.
    pub ds: f64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            models: Vec::new(),
            alpha_mode: AlphaModeConfig::Grid,
            alpha_values: Vec::new(),
            n_points: Vec::new(),
            sigma_mn: vec![0.0],
            trajectories_per_cell: 50,
            ds: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaModeConfig {
    Grid,
    Uniform,
}

/// The `[prior]` table: inference-time prior selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorConfig {
    /// Exponent prior: "uniform" (the generating law) or "linear" (the
    /// deliberately mismatched alternative).
    pub alpha: AlphaPrior,
    /// Upper edge of the uniform noise prior. Unset applies the dataset
    /// rule: 10 for trajectories generated at sigma_mn = 10, else 1.
    pub noise_max: Option<f64>,
}

impl Default for PriorConfig {
    fn default() -> Self {
        Self {
            alpha: AlphaPrior::Uniform,
            noise_max: None,
        }
    }
}

/// The `[nested]` table, mirroring [`NestedConfig`]; seeds and diagnostics
/// are managed per job and not configurable here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NestedSection {
    pub n_live: usize,
    pub steps_per_replacement: usize,
    pub termination_fraction: f64,
    pub max_iterations: usize,
}

impl Default for NestedSection {
    fn default() -> Self {
        let base = NestedConfig::default();
        Self {
            n_live: base.n_live,
            steps_per_replacement: base.steps_per_replacement,
            termination_fraction: base.termination_fraction,
            max_iterations: base.max_iterations,
        }
    }
}

impl NestedSection {
    pub fn to_config(self) -> NestedConfig {
        NestedConfig {
            n_live: self.n_live,
            steps_per_replacement: self.steps_per_replacement,
            termination_fraction: self.termination_fraction,
            max_iterations: self.max_iterations,
            ..NestedConfig::default()
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }

    /// Checks the fields every command relies on.
    pub fn validate_common(&self) -> Result<()> {
        if !(1..=3).contains(&self.dims) {
            bail!("dims must be between 1 and 3, got {}", self.dims);
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            bail!("dt must be positive and finite, got {}", self.dt);
        }
        let nested = &self.nested;
        if nested.n_live < 2 {
            bail!("[nested] n_live must be at least 2, got {}", nested.n_live);
        }
        if nested.steps_per_replacement < 1 {
            bail!("[nested] steps_per_replacement must be at least 1");
        }
        if !(nested.termination_fraction > 0.0 && nested.termination_fraction < 1.0) {
            bail!(
                "[nested] termination_fraction must lie in (0, 1), got {}",
                nested.termination_fraction
            );
        }
        if nested.max_iterations == 0 {
            bail!("[nested] max_iterations must be positive");
        }
        if let Some(noise_max) = self.prior.noise_max {
            if !(noise_max.is_finite() && noise_max > 0.0) {
                bail!("[prior] noise_max must be positive and finite, got {noise_max}");
            }
        }
        Ok(())
    }

    /// Checks the `[dataset]` table; only `simulate` and `benchmark` use it.
    pub fn validate_dataset(&self) -> Result<()> {
        let d = &self.dataset;
        if d.models.is_empty() {
            bail!("[dataset] models must name at least one of sbm, fbm, ctrw");
        }
        for (i, model) in d.models.iter().enumerate() {
            if d.models[..i].contains(model) {
                bail!("[dataset] models lists {model} twice");
            }
        }
        match d.alpha_mode {
            AlphaModeConfig::Grid => {
                if d.alpha_values.is_empty() {
                    bail!("[dataset] alpha_mode = \"grid\" needs alpha_values");
                }
                for &alpha in &d.alpha_values {
                    if !(alpha.is_finite() && 0.0 < alpha && alpha < 2.0) {
                        bail!("[dataset] alpha values must lie in (0, 2), got {alpha}");
                    }
                }
            }
            AlphaModeConfig::Uniform => {
                if !d.alpha_values.is_empty() {
                    bail!("[dataset] alpha_values is only used with alpha_mode = \"grid\"");
                }
                if d.models.contains(&ModelKind::Ctrw) {
                    bail!("[dataset] CTRW cells need fixed exponents (alpha_mode = \"grid\")");
                }
            }
        }
        if d.models.contains(&ModelKind::Ctrw) {
            for &alpha in &d.alpha_values {
                if alpha > 1.0 {
                    bail!("[dataset] CTRW requires alpha <= 1, got {alpha}");
                }
            }
            if !(d.ds.is_finite() && d.ds > 0.0) {
                bail!("[dataset] ds must be positive and finite, got {}", d.ds);
            }
        }
        if d.n_points.is_empty() {
            bail!("[dataset] n_points must list at least one trajectory length");
        }
        if let Some(&n) = d.n_points.iter().find(|&&n| n < 1) {
            bail!("[dataset] trajectory lengths must be at least 1, got {n}");
        }
        if d.sigma_mn.is_empty() {
            bail!("[dataset] sigma_mn must list at least one noise level");
        }
        for &sigma in &d.sigma_mn {
            if !(sigma.is_finite() && sigma >= 0.0) {
                bail!("[dataset] sigma_mn must be finite and nonnegative, got {sigma}");
            }
        }
        if d.trajectories_per_cell < 1 {
            bail!("[dataset] trajectories_per_cell must be at least 1");
        }
        Ok(())
    }

    /// FNV-1a hash of the canonical serialized config with `workers` zeroed:
    /// outputs are worker-invariant, so provenance and the resume cache stay
    /// valid across thread counts.
    pub fn canonical_hash(&self) -> String {
        let mut canon = self.clone();
        canon.workers = 0;
        let text = toml::to_string(&canon).expect("a validated config serializes");
        format!("{:016x}", anomdiff::seeds::string_tag(&text))
    }
}
