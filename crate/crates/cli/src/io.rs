//! File plumbing: JSON Lines, atomic writes, and the provenance sidecar.

use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Writes via a temp file + rename so readers never observe partial files.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// One serialized record per line.
pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut text = String::new();
    for record in records {
        text.push_str(&serde_json::to_string(record)?);
        text.push('\n');
    }
    atomic_write(path, text.as_bytes())
}

/// A lenient JSON-Lines read: well-formed records in file order, plus the
/// (1-based line number, message) of every malformed line.
pub struct JsonlRead<T> {
    pub records: Vec<T>,
    pub malformed: Vec<(usize, String)>,
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<JsonlRead<T>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(record) => records.push(record),
            Err(err) => malformed.push((index + 1, err.to_string())),
        }
    }
    Ok(JsonlRead { records, malformed })
}

/// Provenance sidecar written next to every output batch. Deliberately
/// timestamp-free, so rerunning a config reproduces outputs byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub tool_version: String,
    pub command: String,
    pub config_hash: String,
    pub config: RunConfig,
}

pub fn write_run_meta(dir: &Path, command: &str, cfg: &RunConfig) -> Result<()> {
    let meta = RunMeta {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        config_hash: cfg.canonical_hash(),
        config: cfg.clone(),
    };
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    atomic_write(&dir.join("run_meta.json"), text.as_bytes())
}
