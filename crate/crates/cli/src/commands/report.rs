//! `report`: reshape a benchmark report into tidy per-figure tables (one
//! row per point, explicit error columns) and, on request, a gnuplot script
//! rendering them.

use std::fs;
use std::path::Path;

use anomdiff::inference::BenchmarkReport;
use anomdiff::model::ModelKind;
use anyhow::{Context, Result};

use crate::io::atomic_write;
use crate::{Outcome, ReportArgs};

pub fn run(args: &ReportArgs) -> Result<Outcome> {
    let path = if args.input.is_dir() {
        args.input.join("report.json")
    } else {
        args.input.clone()
    };
    let text =
        fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let report: BenchmarkReport = serde_json::from_str(&text)
        .with_context(|| format!("schema mismatch in {}", path.display()))?;
    report.validate()?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    write_figure_tables(&report, &args.out, args.gnuplot)?;
    println!(
        "wrote figure tables for {} cells to {}",
        report.cells.len(),
        args.out.display()
    );
    Ok(Outcome::Clean)
}

/// The per-figure tables: MAE curves, F1 curves, confusion counts, and
/// (when CTRW cells are present) misspecified assignment fractions.
pub fn write_figure_tables(report: &BenchmarkReport, out: &Path, gnuplot: bool) -> Result<()> {
    let mut mae = String::from("alpha,mae,stderr,model,n,sigma_mn\n");
    for c in &report.cells {
        mae.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.alpha_label, c.mae, c.mae_stderr, c.model, c.n_points, c.sigma_mn
        ));
    }
    atomic_write(&out.join("mae_vs_alpha.csv"), mae.as_bytes())?;

    // F1 scores a grid point with its models pooled: emit each point once.
    let mut f1 = String::from("alpha,f1,stderr,n,sigma_mn\n");
    let mut seen: Vec<(String, usize, u64)> = Vec::new();
    for c in &report.cells {
        let (Some(value), Some(stderr)) = (c.f1, c.f1_stderr) else {
            continue;
        };
        let key = (c.alpha_label.clone(), c.n_points, c.sigma_mn.to_bits());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        f1.push_str(&format!(
            "{},{},{},{},{}\n",
            c.alpha_label, value, stderr, c.n_points, c.sigma_mn
        ));
    }
    atomic_write(&out.join("f1_vs_alpha.csv"), f1.as_bytes())?;

    // Confusion: four counts per grid point, candidate order both ways.
    let mut confusion =
        String::from("alpha,n,sigma_mn,sbm_as_sbm,sbm_as_fbm,fbm_as_sbm,fbm_as_fbm\n");
    let mut groups: Vec<((String, usize, u64), [usize; 4])> = Vec::new();
    for c in &report.cells {
        let offset = match c.model {
            ModelKind::Sbm => 0,
            ModelKind::Fbm => 2,
            ModelKind::Ctrw => continue,
        };
        let key = (c.alpha_label.clone(), c.n_points, c.sigma_mn.to_bits());
        let position = match groups.iter().position(|(k, _)| *k == key) {
            Some(position) => position,
            None => {
                groups.push((key, [0; 4]));
                groups.len() - 1
            }
        };
        groups[position].1[offset] += c.assigned[0];
        groups[position].1[offset + 1] += c.assigned[1];
    }
    for ((alpha, n, sigma_bits), counts) in &groups {
        confusion.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            alpha,
            n,
            f64::from_bits(*sigma_bits),
            counts[0],
            counts[1],
            counts[2],
            counts[3]
        ));
    }
    atomic_write(&out.join("confusion.csv"), confusion.as_bytes())?;

    let ctrw: Vec<_> = report
        .cells
        .iter()
        .filter(|c| c.model == ModelKind::Ctrw)
        .collect();
    if !ctrw.is_empty() {
        let mut table = String::from("alpha,sbm_fraction,fbm_fraction,n,sigma_mn\n");
        for c in ctrw {
            table.push_str(&format!(
                "{},{},{},{},{}\n",
                c.alpha_label,
                c.sbm_fraction,
                c.assigned[1] as f64 / c.count as f64,
                c.n_points,
                c.sigma_mn
            ));
        }
        atomic_write(&out.join("ctrw_fraction.csv"), table.as_bytes())?;
    }

    if gnuplot {
        atomic_write(&out.join("plots.gp"), GNUPLOT_SCRIPT.as_bytes())?;
    }
    Ok(())
}

/// Convenience renderer for fixed-exponent grids; "uniform" cells have no
/// numeric x and need their own plotting.
const GNUPLOT_SCRIPT: &str = r#"set datafile separator ","
set key autotitle columnhead
set terminal pngcairo size 900,600

set output "mae_vs_alpha.png"
set xlabel "ground-truth alpha"
set ylabel "MAE"
plot "mae_vs_alpha.csv" using 1:2:3 with yerrorlines title "MAE"

set output "f1_vs_alpha.png"
set xlabel "ground-truth alpha"
set ylabel "F1"
set yrange [0:1]
plot "f1_vs_alpha.csv" using 1:2:3 with yerrorlines title "F1"
"#;
