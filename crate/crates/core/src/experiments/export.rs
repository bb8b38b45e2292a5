use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::runner::TrialRecord;
use super::stats::SummaryStats;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 10] = [
    "trial", "seed", "n", "r", "p", "edges", "measure", "value", "error", "runtime_ms",
];

/// Per-row constants of a CSV export.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvMeta {
    pub n: u32,
    pub r: usize,
    pub p: f64,
    pub measure: String,
}

impl CsvMeta {
    pub fn from_config(cfg: &ExperimentConfig, p: f64) -> Self {
        Self {
            n: cfg.n,
            r: cfg.r,
            p,
            measure: cfg.measure.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Everything an experiment run produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// `p` after evaluating any expression.
    pub resolved_p: f64,
    pub rng_id: String,
    pub records: Vec<TrialRecord>,
    pub summary: Option<SummaryStats>,
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn write_csv<W: Write>(w: W, records: &[TrialRecord], meta: &CsvMeta) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for rec in records {
        out.write_record([
            rec.trial.to_string(),
            rec.seed.to_string(),
            meta.n.to_string(),
            meta.r.to_string(),
            format!("{:e}", meta.p),
            opt(rec.edges.map(|e| e.to_string())),
            meta.measure.clone(),
            opt(rec.value.map(|v| v.to_string())),
            opt(rec.error.clone()),
            opt(rec.runtime_ms.map(|t| format!("{t:.3}"))),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn export_csv(path: impl AsRef<Path>, records: &[TrialRecord], meta: &CsvMeta) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(BufWriter::new(file), records, meta).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn export_json(path: impl AsRef<Path>, report: &ExperimentReport) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn read_json_report(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
