//! Cross-run summaries, one-way ANOVA and the CSV tables that carry them.

mod anova;
pub mod special;

pub use anova::{one_way_anova, AnovaResult, ALPHA};

use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engines::RunResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunStats {
    pub j_min: f64,
    pub j_mean: f64,
    pub j_max: f64,
    pub cpu_mean_s: f64,
    pub runs: usize,
    /// Final best J of every run, in input order.
    pub values: Vec<f64>,
}

impl RunStats {
    pub fn from_values(values: &[f64], wallclock_s: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Stats("cannot summarize zero runs".into()));
        }
        let j_min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let j_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let j_mean = (values.iter().sum::<f64>() / values.len() as f64).clamp(j_min, j_max);
        let cpu_mean_s = if wallclock_s.is_empty() {
            0.0
        } else {
            wallclock_s.iter().sum::<f64>() / wallclock_s.len() as f64
        };
        Ok(RunStats {
            j_min,
            j_mean,
            j_max,
            cpu_mean_s,
            runs: values.len(),
            values: values.to_vec(),
        })
    }
}

pub fn summarize(runs: &[RunResult]) -> Result<RunStats> {
    let values: Vec<f64> = runs.iter().map(|r| r.best_j).collect();
    let clock: Vec<f64> = runs.iter().map(|r| r.wallclock_s).collect();
    RunStats::from_values(&values, &clock)
}

/// One row per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub label: String,
    pub seed: u64,
    #[serde(rename = "J")]
    pub j: f64,
    pub wallclock_s: f64,
    pub generations: usize,
    pub evaluations: u64,
}

/// One row per configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub label: String,
    #[serde(rename = "J_min")]
    pub j_min: f64,
    #[serde(rename = "J_mean")]
    pub j_mean: f64,
    #[serde(rename = "J_max")]
    pub j_max: f64,
    pub cpu_mean_s: f64,
    pub runs: usize,
}

impl SummaryRow {
    pub fn new(label: &str, stats: &RunStats) -> Self {
        SummaryRow {
            label: label.to_string(),
            j_min: stats.j_min,
            j_mean: stats.j_mean,
            j_max: stats.j_max,
            cpu_mean_s: stats.cpu_mean_s,
            runs: stats.runs,
        }
    }
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_raw_csv(path: &Path) -> Result<Vec<RawRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(Error::from)
}

/// Groups J values by label, keeping first-appearance order.
pub fn group_by_label(rows: &[RawRow]) -> Vec<(String, Vec<f64>)> {
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for row in rows {
        match groups.iter_mut().find(|(l, _)| *l == row.label) {
            Some((_, v)) => v.push(row.j),
            None => groups.push((row.label.clone(), vec![row.j])),
        }
    }
    groups
}

/// Summary rows per label from raw rows.
pub fn summarize_raw(rows: &[RawRow]) -> Result<Vec<SummaryRow>> {
    let mut out = Vec::new();
    for (label, _) in group_by_label(rows) {
        let mine: Vec<&RawRow> = rows.iter().filter(|r| r.label == label).collect();
        let j: Vec<f64> = mine.iter().map(|r| r.j).collect();
        let t: Vec<f64> = mine.iter().map(|r| r.wallclock_s).collect();
        out.push(SummaryRow::new(&label, &RunStats::from_values(&j, &t)?));
    }
    Ok(out)
}
