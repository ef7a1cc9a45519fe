//! `mrta`: generate instances, solve them, run multi-seed benchmarks and compare
//! configurations.
//!
//! Exit codes: 0 success, 1 usage error, 2 infeasible instance, 3 I/O or schema
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mrta_core::experiment::{result_json, run_benchmark, schedule_records, BenchmarkOptions, ExperimentSpec};
use mrta_core::scenario::{scenario_to_json, GeneratorParams};
use mrta_core::stats::{group_by_label, read_raw_csv, summarize_raw, write_csv, SummaryRow, ALPHA};
use mrta_core::{
    build_travel_matrix, generate_scenario, load_scenario, one_way_anova, run, save_scenario, EngineKind, GaOverrides,
    Layout, OperatorSet, Scenario,
};

#[derive(Parser)]
#[command(name = "mrta", version, about = "Genetic algorithms for multi-robot task allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance.
    Generate(GenerateArgs),
    /// Run one engine on a scenario file.
    Solve(SolveArgs),
    /// Run every configuration of an experiment spec over its seeds.
    Benchmark(BenchmarkArgs),
    /// One-way ANOVA over the labels of a raw results CSV.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_layout)]
    layout: Layout,
    /// Single-robot tasks.
    #[arg(long)]
    single: usize,
    /// Cooperative two-robot tasks.
    #[arg(long)]
    coop: usize,
    #[arg(long)]
    robots: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    width: usize,
    #[arg(long, default_value_t = 100)]
    height: usize,
    /// Inspection time per subtask, seconds.
    #[arg(long, default_value_t = 2.0)]
    duration: f64,
    /// Robot speed, cells per second.
    #[arg(long, default_value_t = 1.0)]
    speed: f64,
    /// Output file; the scenario is printed to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    scenario: PathBuf,
    /// JSON file with GA parameters; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    engine: Option<EngineKind>,
    /// Mutation operator set, by name or GA1..GA8.
    #[arg(long)]
    mutation: Option<OperatorSet>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pop_siz: Option<usize>,
    #[arg(long)]
    pop_sub: Option<usize>,
    #[arg(long)]
    eli_cnt: Option<usize>,
    #[arg(long)]
    best_num: Option<usize>,
    #[arg(long)]
    tor_siz: Option<usize>,
    #[arg(long)]
    p_m: Option<f64>,
    #[arg(long)]
    p_c: Option<f64>,
    #[arg(long)]
    p_a: Option<f64>,
    /// Result JSON; printed to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the schedule as CSV, one row per visited subtask.
    #[arg(long)]
    dump_schedule: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    spec: PathBuf,
    /// Concurrent runs; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write 0 in the wall-clock column so reruns give identical files.
    #[arg(long)]
    no_timing: bool,
    /// Also write per-generation best J to traces.csv.
    #[arg(long)]
    traces: bool,
    /// Output directory; overrides `output_dir` of the experiment file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    raw: PathBuf,
    /// Labels to compare, comma separated; all labels when omitted.
    #[arg(long, value_delimiter = ',')]
    labels: Vec<String>,
}

/// Errors detected by the command line itself, reported with exit code 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_layout(s: &str) -> Result<Layout, String> {
    match s.to_ascii_lowercase().as_str() {
        "rows" => Ok(Layout::Rows),
        "islands" => Ok(Layout::Islands),
        _ => Err(format!("unknown layout `{s}`; valid layouts: rows, islands")),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use mrta_core::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                _ if e.is_infeasible() => 2,
                E::Config(_) | E::Generation(_) | E::Stats(_) => 1,
                _ => 3,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return 3;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Benchmark(a) => benchmark(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn summary_line(s: &Scenario) -> String {
    format!("N^T={} N^P={} N^R={}", s.n_tasks(), s.n_subtasks(), s.n_robots())
}

fn generate(a: GenerateArgs) -> anyhow::Result<()> {
    let params = GeneratorParams {
        duration: a.duration,
        speed: a.speed,
        ..GeneratorParams::new(a.layout, a.single, a.coop, a.robots, a.seed).with_size(a.width, a.height)
    };
    let scenario = generate_scenario(&params)?;
    match &a.output {
        Some(path) => {
            save_scenario(&scenario, path)?;
            println!("{} -> {}", summary_line(&scenario), path.display());
        }
        None => {
            println!("{}", scenario_to_json(&scenario));
            eprintln!("{}", summary_line(&scenario));
        }
    }
    Ok(())
}

fn read_overrides(path: &Path) -> anyhow::Result<GaOverrides> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn solve(a: SolveArgs) -> anyhow::Result<()> {
    let base = match &a.config {
        Some(p) => read_overrides(p)?,
        None => GaOverrides::default(),
    };
    let flags = GaOverrides {
        engine: a.engine,
        pop_siz: a.pop_siz,
        pop_sub: a.pop_sub,
        eli_cnt: a.eli_cnt,
        best_num: a.best_num,
        tor_siz: a.tor_siz,
        p_m: a.p_m,
        p_c: a.p_c,
        p_a: a.p_a,
        gen_num: a.gens,
        operator_set: a.mutation,
        seed: a.seed,
    };
    let config = base.merge(flags).resolve()?;
    let scenario = load_scenario(&a.scenario)?;
    let matrix = build_travel_matrix(&scenario)?;
    let result = run(&config, &scenario, &matrix)?;

    if let Some(path) = &a.dump_schedule {
        write_csv(path, &schedule_records(&result.phenotype, &scenario))?;
    }
    let doc = serde_json::to_string_pretty(&result_json(&result, &scenario))?;
    match &a.output {
        Some(path) => {
            fs::write(path, doc + "\n").with_context(|| format!("writing {}", path.display()))?;
            println!(
                "{} {} {}: J = {:.3} after {} generations ({:.2} s)",
                summary_line(&scenario),
                config.engine,
                config.operator_set,
                result.best_j,
                result.generations,
                result.wallclock_s
            );
        }
        None => println!("{doc}"),
    }
    Ok(())
}

fn print_summary(rows: &[SummaryRow]) {
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(5).max(5);
    println!(
        "{:width$}  {:>10} {:>10} {:>10} {:>8} {:>5}",
        "label", "J_min", "J_mean", "J_max", "cpu_s", "runs"
    );
    for r in rows {
        println!(
            "{:width$}  {:>10.2} {:>10.2} {:>10.2} {:>8.3} {:>5}",
            r.label, r.j_min, r.j_mean, r.j_max, r.cpu_mean_s, r.runs
        );
    }
}

fn benchmark(a: BenchmarkArgs) -> anyhow::Result<()> {
    let spec = ExperimentSpec::load(&a.spec)?;
    let out = a
        .out
        .or_else(|| spec.output_dir.clone())
        .ok_or_else(|| usage("no output directory: pass --out or set `output_dir` in the experiment file"))?;
    let scenario = spec.scenario.load()?;
    let matrix = build_travel_matrix(&scenario)?;
    let options = BenchmarkOptions {
        jobs: a.jobs,
        timing: !a.no_timing,
    };
    let outcome = run_benchmark(&spec, &scenario, &matrix, options)?;
    outcome.write(&out, a.traces)?;
    println!(
        "{}, {} runs per config -> {}",
        summary_line(&scenario),
        spec.runs,
        out.display()
    );
    print_summary(&outcome.summary);
    Ok(())
}

fn compare(a: CompareArgs) -> anyhow::Result<()> {
    let rows = read_raw_csv(&a.raw)?;
    let groups = group_by_label(&rows);
    let available = || groups.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(", ");
    let chosen: Vec<(String, Vec<f64>)> = if a.labels.is_empty() {
        groups.clone()
    } else {
        a.labels
            .iter()
            .map(|label| {
                groups
                    .iter()
                    .find(|(l, _)| l == label)
                    .cloned()
                    .ok_or_else(|| usage(format!("unknown label `{label}`; available: {}", available())))
            })
            .collect::<anyhow::Result<_>>()?
    };
    if chosen.len() < 2 {
        return Err(usage(format!(
            "need at least two labels to compare; available: {}",
            available()
        )));
    }
    let summary = summarize_raw(&rows)?;
    let stats: Vec<SummaryRow> = chosen
        .iter()
        .filter_map(|(label, _)| summary.iter().find(|r| &r.label == label).cloned())
        .collect();
    print_summary(&stats);
    let values: Vec<&[f64]> = chosen.iter().map(|(_, v)| v.as_slice()).collect();
    let r = one_way_anova(&values)?;
    println!(
        "F({}, {}) = {:.4}, p = {:.4e}: {} at {ALPHA}",
        r.df_between,
        r.df_within,
        r.f,
        r.p,
        if r.significant {
            "significant"
        } else {
            "not significant"
        }
    );
    Ok(())
}
