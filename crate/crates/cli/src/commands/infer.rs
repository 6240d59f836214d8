//! `infer`: two-model Bayesian analysis of an existing trajectory file.
//!
//! Each output record depends only on the master seed and the trajectory
//! itself (seeds derive from its id), never on file position or worker
//! scheduling. Malformed input lines are skipped and counted; a run where
//! anything was skipped or failed exits with the partial-failure code.

use std::fs;

use anomdiff::simulate::TrajectoryRecord;
use anyhow::{bail, Context, Result};

use crate::config::RunConfig;
use crate::io::{read_jsonl, write_jsonl, write_run_meta};
use crate::jobs::JobBatch;
use crate::{InferArgs, Outcome};

pub fn run(args: &InferArgs) -> Result<Outcome> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    if let Some(prior) = args.prior {
        cfg.prior.alpha = prior.alpha_prior();
    }
    if let Some(noise_max) = args.noise_max {
        cfg.prior.noise_max = Some(noise_max);
    }
    cfg.validate_common()?;

    let read = read_jsonl::<TrajectoryRecord<f64>>(&args.input)?;
    for (line, err) in &read.malformed {
        eprintln!(
            "warning: {}:{line}: skipping malformed record: {err}",
            args.input.display()
        );
    }
    if read.records.is_empty() {
        bail!(
            "no valid trajectory records in {} ({} malformed line(s))",
            args.input.display(),
            read.malformed.len()
        );
    }

    let batch = JobBatch {
        prior: cfg.prior.alpha,
        noise_max: cfg.prior.noise_max,
        nested: cfg.nested.to_config(),
        master_seed: cfg.seed,
        workers: cfg.workers,
        cache_dir: None,
        reuse_cache: false,
    };
    let outcomes = batch.run(&read.records)?;

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(record) => records.push(record),
            Err(failure) => failures.push(failure),
        }
    }

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    write_jsonl(&args.out.join("inferences.jsonl"), &records)?;
    if !failures.is_empty() {
        write_jsonl(&args.out.join("errors.jsonl"), &failures)?;
    }
    write_run_meta(&args.out, "infer", &cfg)?;
    println!(
        "inferred {} of {} trajectories ({} failed, {} malformed input line(s))",
        records.len(),
        read.records.len(),
        failures.len(),
        read.malformed.len()
    );

    let failed = failures.len() + read.malformed.len();
    if failed > 0 {
        Ok(Outcome::Partial {
            failed,
            total: read.records.len() + read.malformed.len(),
        })
    } else {
        Ok(Outcome::Clean)
    }
}
