//! Multi-run experiment files and their results.
//!
//! Every (configuration, run) cell is seeded with `base_seed + run_index`, so a
//! spec fully determines every result apart from the timing column.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::Phenotype;
use crate::engines::{run, GaConfig, GaOverrides, RunResult};
use crate::error::{Error, Result};
use crate::scenario::{generate_scenario, load_scenario, GeneratorParams, Scenario, TravelTimeMatrix};
use crate::stats::{summarize_raw, write_csv, RawRow, SummaryRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioSource {
    /// A scenario file, relative paths resolved against the experiment file.
    Path(PathBuf),
    Generate(GeneratorParams),
}

impl ScenarioSource {
    pub fn load(&self) -> Result<Scenario> {
        match self {
            ScenarioSource::Path(p) => load_scenario(p),
            ScenarioSource::Generate(params) => generate_scenario(params),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEntry {
    pub label: String,
    #[serde(flatten)]
    pub overrides: GaOverrides,
}

// Written by hand because a flattened struct cannot reject unknown keys.
impl<'de> Deserialize<'de> for ConfigEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let mut map = serde_json::Map::deserialize(d)?;
        let label = match map.remove("label") {
            Some(serde_json::Value::String(s)) => s,
            Some(_) => return Err(D::Error::custom("`label` must be a string")),
            None => return Err(D::Error::missing_field("label")),
        };
        let overrides = GaOverrides::deserialize(serde_json::Value::Object(map)).map_err(D::Error::custom)?;
        Ok(ConfigEntry { label, overrides })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub scenario: ScenarioSource,
    pub configs: Vec<ConfigEntry>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Generation count for configs that do not set their own.
    #[serde(default)]
    pub gen_num: Option<usize>,
}

fn default_runs() -> usize {
    20
}

impl ExperimentSpec {
    pub fn parse(json: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(json);
        let spec: ExperimentSpec = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    /// Reads a spec and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut spec = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let ScenarioSource::Path(p) = &mut spec.scenario {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let Some(out) = &mut spec.output_dir {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.configs.is_empty() {
            return Err(Error::Config("spec lists no configurations".into()));
        }
        for (i, c) in self.configs.iter().enumerate() {
            if self.configs[..i].iter().any(|o| o.label == c.label) {
                return Err(Error::Config(format!("duplicate label `{}`", c.label)));
            }
            if c.overrides.seed.is_some() {
                return Err(Error::Config(format!(
                    "config `{}` sets a seed; seeds are base_seed + run index",
                    c.label
                )));
            }
            self.resolve(c, 0)?;
        }
        Ok(())
    }

    /// Full configuration of one cell.
    pub fn resolve(&self, entry: &ConfigEntry, run_index: usize) -> Result<GaConfig> {
        let mut o = entry.overrides.clone();
        o.gen_num = o.gen_num.or(self.gen_num);
        o.seed = Some(self.base_seed + run_index as u64);
        o.resolve()
            .map_err(|e| Error::Config(format!("config `{}`: {e}", entry.label)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkOptions {
    /// Concurrent cells; 0 means one per available core.
    pub jobs: usize,
    /// Record wall-clock seconds; when false the column is written as 0 so that
    /// reruns produce byte-identical files.
    pub timing: bool,
}

impl Default for BenchmarkOptions {
    fn default() -> Self {
        BenchmarkOptions { jobs: 0, timing: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub label: String,
    pub seed: u64,
    pub generation: usize,
    pub best_j: f64,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub label: String,
    pub result: RunResult,
}

#[derive(Debug, Clone)]
pub struct BenchmarkOutcome {
    pub cells: Vec<CellResult>,
    pub raw: Vec<RawRow>,
    pub summary: Vec<SummaryRow>,
}

impl BenchmarkOutcome {
    pub fn traces(&self) -> Vec<TraceRow> {
        self.cells
            .iter()
            .flat_map(|c| {
                c.result.trace.iter().enumerate().map(|(generation, &best_j)| TraceRow {
                    label: c.label.clone(),
                    seed: c.result.config.seed,
                    generation,
                    best_j,
                })
            })
            .collect()
    }

    /// Writes `raw.csv`, `summary.csv` and, if asked, `traces.csv` into `dir`.
    pub fn write(&self, dir: &Path, traces: bool) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_csv(&dir.join("raw.csv"), &self.raw)?;
        write_csv(&dir.join("summary.csv"), &self.summary)?;
        if traces {
            write_csv(&dir.join("traces.csv"), &self.traces())?;
        }
        Ok(())
    }
}

/// Runs every (configuration, seed) cell. Rows come out in config order, then
/// run order, whatever order the cells finish in.
pub fn run_benchmark(
    spec: &ExperimentSpec,
    scenario: &Scenario,
    matrix: &TravelTimeMatrix,
    options: BenchmarkOptions,
) -> Result<BenchmarkOutcome> {
    spec.validate()?;
    let mut cells = Vec::with_capacity(spec.configs.len() * spec.runs);
    for entry in &spec.configs {
        for r in 0..spec.runs {
            cells.push((entry.label.clone(), spec.resolve(entry, r)?));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<RunResult> = pool.install(|| {
        cells
            .par_iter()
            .map(|(_, config)| run(config, scenario, matrix))
            .collect::<Result<_>>()
    })?;

    let cells: Vec<CellResult> = cells
        .into_iter()
        .zip(results)
        .map(|((label, _), result)| CellResult { label, result })
        .collect();
    let raw: Vec<RawRow> = cells
        .iter()
        .map(|c| RawRow {
            label: c.label.clone(),
            seed: c.result.config.seed,
            j: c.result.best_j,
            wallclock_s: if options.timing { c.result.wallclock_s } else { 0.0 },
            generations: c.result.generations,
            evaluations: c.result.evaluations,
        })
        .collect();
    let summary = summarize_raw(&raw)?;
    Ok(BenchmarkOutcome { cells, raw, summary })
}

/// One executed subtask, with 1-based ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleRecord {
    pub robot: usize,
    pub subtask: usize,
    pub task: usize,
    pub arrival: f64,
    pub start: f64,
    pub wait: f64,
    pub depart: f64,
}

pub fn schedule_records(phenotype: &Phenotype, scenario: &Scenario) -> Vec<ScheduleRecord> {
    phenotype
        .robots
        .iter()
        .enumerate()
        .flat_map(|(k, r)| {
            r.visits.iter().map(move |v| ScheduleRecord {
                robot: k + 1,
                subtask: v.subtask + 1,
                task: scenario.subtasks[v.subtask].task + 1,
                arrival: v.arrival,
                start: v.start,
                wait: v.wait,
                depart: v.depart,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
struct RobotReport {
    robot: usize,
    completion: f64,
    visits: Vec<ScheduleRecord>,
}

#[derive(Debug, Clone, Serialize)]
struct GenotypeReport {
    chromosome: Vec<usize>,
    apportion: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct SolveReport<'a> {
    #[serde(rename = "best_J")]
    best_j: f64,
    per_robot: &'a [f64],
    schedule: Vec<RobotReport>,
    trace: &'a [f64],
    config: &'a GaConfig,
    genotype: GenotypeReport,
    wallclock_s: f64,
    generations: usize,
    evaluations: u64,
}

/// Result document of a single run, ids 1-based.
pub fn result_json(result: &RunResult, scenario: &Scenario) -> serde_json::Value {
    let records = schedule_records(&result.phenotype, scenario);
    let schedule = result
        .phenotype
        .robots
        .iter()
        .enumerate()
        .map(|(k, r)| RobotReport {
            robot: k + 1,
            completion: r.completion,
            visits: records.iter().filter(|v| v.robot == k + 1).cloned().collect(),
        })
        .collect();
    let report = SolveReport {
        best_j: result.best_j,
        per_robot: &result.fitness.per_robot,
        schedule,
        trace: &result.trace,
        config: &result.config,
        genotype: GenotypeReport {
            chromosome: result.best.chromosome.iter().map(|t| t + 1).collect(),
            apportion: result.best.apportion.clone(),
        },
        wallclock_s: result.wallclock_s,
        generations: result.generations,
        evaluations: result.evaluations,
    };
    serde_json::to_value(report).expect("report serializes")
}
