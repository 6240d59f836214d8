//! `benchmark`: simulate the configured grid, infer every trajectory, and
//! aggregate MAE / F1 / confusion tables.
//!
//! Per-trajectory results are cached under `cache/<config hash>/` as they
//! complete, so an interrupted run rerun with `--resume` recomputes only
//! what is missing and lands on byte-identical outputs. Failed trajectories
//! are dropped from the aggregates and listed in errors.jsonl; the report's
//! per-cell `count` column carries the shortfall and the exit code marks
//! the run as partial.

use std::collections::HashMap;
use std::fs;

use anomdiff::inference::{
    f1_score, mae, BenchmarkCell, BenchmarkMetadata, BenchmarkReport, InferenceRecord,
};
use anomdiff::model::ModelKind;
use anyhow::{Context, Result};

use crate::commands::report::write_figure_tables;
use crate::config::RunConfig;
use crate::dataset::{expand_cells, generate_cells, CellSpec};
use crate::io::{atomic_write, write_jsonl, write_run_meta};
use crate::jobs::JobBatch;
use crate::{BenchmarkArgs, Outcome};

pub fn run(args: &BenchmarkArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    if let Some(prior) = args.prior {
        cfg.prior.alpha = prior.alpha_prior();
    }
    cfg.validate_common()?;
    cfg.validate_dataset()?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let cells = expand_cells(&cfg);
    let per_cell = generate_cells(&cfg, &cells)?;
    let flat: Vec<_> = per_cell.into_iter().flatten().collect();
    write_jsonl(&args.out.join("trajectories.jsonl"), &flat)?;

    let cache_dir = args.out.join("cache").join(cfg.canonical_hash());
    let batch = JobBatch {
        prior: cfg.prior.alpha,
        noise_max: cfg.prior.noise_max,
        nested: cfg.nested.to_config(),
        master_seed: cfg.seed,
        workers: cfg.workers,
        cache_dir: Some(&cache_dir),
        reuse_cache: args.resume,
    };
    let outcomes = batch.run(&flat)?;

    // generate_cells emits exactly trajectories_per_cell records per cell,
    // so input index / per recovers each record's cell.
    let per = cfg.dataset.trajectories_per_cell;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut cell_records: Vec<Vec<InferenceRecord>> = vec![Vec::new(); cells.len()];
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(record) => {
                cell_records[index / per].push(record.clone());
                records.push(record);
            }
            Err(failure) => failures.push(failure),
        }
    }

    let report = aggregate(&cfg, &cells, &cell_records)?;
    write_jsonl(&args.out.join("inferences.jsonl"), &records)?;
    if !failures.is_empty() {
        write_jsonl(&args.out.join("errors.jsonl"), &failures)?;
    }
    let mut report_json = serde_json::to_string_pretty(&report)?;
    report_json.push('\n');
    atomic_write(&args.out.join("report.json"), report_json.as_bytes())?;
    atomic_write(&args.out.join("report.csv"), report.to_csv().as_bytes())?;
    write_figure_tables(&report, &args.out, false)?;
    write_run_meta(&args.out, "benchmark", &cfg)?;
    println!(
        "benchmark: {} cells, {} trajectories inferred, {} failed; report in {}",
        cells.len(),
        records.len(),
        failures.len(),
        args.out.display()
    );

    if failures.is_empty() {
        Ok(Outcome::Clean)
    } else {
        Ok(Outcome::Partial {
            failed: failures.len(),
            total: flat.len(),
        })
    }
}

/// Key of an (alpha, N, sigma_mn) grid point, pooling that point's models.
type GroupKey = (String, usize, u64);

fn group_key(cell: &CellSpec) -> GroupKey {
    (
        cell.alpha_label.clone(),
        cell.n_points,
        cell.sigma_mn.to_bits(),
    )
}

fn aggregate(
    cfg: &RunConfig,
    cells: &[CellSpec],
    cell_records: &[Vec<InferenceRecord>],
) -> Result<BenchmarkReport> {
    // F1 pools the candidate models at each grid point; CTRW cells stay out
    // of the pool (none of the candidates is "correct" for them).
    let mut pooled: HashMap<GroupKey, (Vec<ModelKind>, Vec<ModelKind>)> = HashMap::new();
    for (cell, records) in cells.iter().zip(cell_records) {
        if cell.model == ModelKind::Ctrw {
            continue;
        }
        let entry = pooled.entry(group_key(cell)).or_default();
        for record in records {
            entry.0.push(record.assigned);
            entry.1.push(cell.model);
        }
    }
    let f1_by_group: HashMap<GroupKey, (f64, f64)> = pooled
        .into_iter()
        .filter(|(_, (assigned, _))| !assigned.is_empty())
        .map(|(key, (assigned, truths))| (key, f1_score(&assigned, &truths)))
        .collect();

    let mut out = Vec::new();
    for (cell, records) in cells.iter().zip(cell_records) {
        if records.is_empty() {
            // Every trajectory of this cell failed: the row is dropped and
            // the failures are listed in errors.jsonl.
            continue;
        }
        let predictions: Vec<f64> = records.iter().map(|r| r.alpha_estimate).collect();
        let truths: Vec<f64> = records
            .iter()
            .map(|r| {
                r.ground_truth
                    .map(|g| g.alpha)
                    .context("benchmark records embed their ground truth")
            })
            .collect::<Result<_>>()?;
        let (mae_value, mae_stderr) = mae(&predictions, &truths)?;

        let mut assigned = [0usize; 2];
        for record in records {
            match record.assigned {
                ModelKind::Sbm => assigned[0] += 1,
                ModelKind::Fbm => assigned[1] += 1,
                ModelKind::Ctrw => unreachable!("assignments are candidate models"),
            }
        }
        let (f1, f1_stderr) = match f1_by_group.get(&group_key(cell)) {
            Some(&(value, stderr)) if cell.model != ModelKind::Ctrw => {
                (Some(value), Some(stderr))
            }
            _ => (None, None),
        };
        out.push(BenchmarkCell {
            alpha_label: cell.alpha_label.clone(),
            n_points: cell.n_points,
            sigma_mn: cell.sigma_mn,
            model: cell.model,
            count: records.len(),
            mae: mae_value,
            mae_stderr,
            f1,
            f1_stderr,
            assigned,
            sbm_fraction: assigned[0] as f64 / records.len() as f64,
        });
    }

    let metadata = BenchmarkMetadata {
        alpha_prior: cfg.prior.alpha,
        master_seed: cfg.seed,
        dims: cfg.dims,
        trajectories_per_cell: cfg.dataset.trajectories_per_cell,
    };
    Ok(BenchmarkReport::new(metadata, out)?)
}
