//! `simulate`: expand the configured grid and write the dataset.

use std::fs;

use anyhow::{Context, Result};

use crate::config::RunConfig;
use crate::dataset::{expand_cells, generate_cells};
use crate::io::{write_jsonl, write_run_meta};
use crate::{Outcome, SimulateArgs};

pub fn run(args: &SimulateArgs) -> Result<Outcome> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate_common()?;
    cfg.validate_dataset()?;

    let cells = expand_cells(&cfg);
    let per_cell = generate_cells(&cfg, &cells)?;
    let records: Vec<_> = per_cell.into_iter().flatten().collect();

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    write_jsonl(&args.out.join("trajectories.jsonl"), &records)?;
    write_run_meta(&args.out, "simulate", &cfg)?;
    println!(
        "wrote {} trajectories across {} cells to {}",
        records.len(),
        cells.len(),
        args.out.display()
    );
    Ok(Outcome::Clean)
}
