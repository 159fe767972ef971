// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! `dqlayout` command-line driver.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use dqlayout::assembler::MetricsReport;
use dqlayout::bench::{standard_suite, BenchmarkSpec};
use dqlayout::partition::PartitionPlan;
use dqlayout::pipeline::{
    run_pipeline, BackendSource, CircuitSource, PartitionSource, PipelineError, RunConfig, SimulatePolicy,
};
use dqlayout::report::{emit_report, emit_report_json};
use dqlayout::scheduler::Mode;
use dqlayout::SimConfig;

const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "dqlayout", version, about = "Distributed quantum circuit layout compiler")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile one circuit into a distributed layout.
    Compile(CompileArgs),
    /// Tabulate metrics from earlier runs.
    Report(ReportArgs),
    /// Run the twelve standard benchmark configurations.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SimulateArg {
    Auto,
    Always,
    Never,
}

impl From<SimulateArg> for SimulatePolicy {
    fn from(a: SimulateArg) -> Self {
        match a {
            SimulateArg::Auto => SimulatePolicy::Auto,
            SimulateArg::Always => SimulatePolicy::Always,
            SimulateArg::Never => SimulatePolicy::Never,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Backend registry (JSON); the built-in fakes when omitted.
    #[arg(long)]
    backends: Option<PathBuf>,
    #[arg(long, default_value = "expanded")]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 1234)]
    seed: u64,
    /// Largest simulated layout.
    #[arg(long, env = "DQLAYOUT_QUBIT_CAP", default_value_t = 24)]
    qubit_cap: usize,
    #[arg(long)]
    no_optimize: bool,
    #[arg(long, value_enum, default_value = "auto")]
    simulate: SimulateArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    /// OpenQASM 2.0 input.
    #[arg(long, conflicts_with = "bench", required_unless_present = "bench")]
    circuit: Option<PathBuf>,
    /// Generated benchmark such as `ghz:6` or `qaoa:4:gamma=0.3`.
    #[arg(long)]
    bench: Option<String>,
    /// Partition file (JSON).
    #[arg(long, conflicts_with = "groups", required_unless_present = "groups")]
    partition: Option<PathBuf>,
    /// Inline partition such as `q0-q1|q2-q3`.
    #[arg(long, requires = "assign")]
    groups: Option<String>,
    /// QPU labels or backend names for `--groups`, comma separated.
    #[arg(long)]
    assign: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// Output directories of earlier `compile` runs.
    #[arg(long = "in", required = true, num_args = 1..)]
    dirs: Vec<PathBuf>,
    /// Also write the reports as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[command(flatten)]
    run: RunArgs,
}

fn config(circuit: CircuitSource, partition: PartitionSource, run: &RunArgs) -> RunConfig {
    let mut cfg = RunConfig::new(circuit, partition);
    cfg.backends = run
        .backends
        .clone()
        .map_or(BackendSource::Builtin, BackendSource::File);
    cfg.mode = run.mode;
    cfg.shots = run.shots;
    cfg.seed = run.seed;
    cfg.optimize = !run.no_optimize;
    cfg.simulate = run.simulate.into();
    cfg.sim = SimConfig::default().with_qubit_cap(run.qubit_cap);
    cfg.out_dir = run.out.clone();
    cfg
}

fn inline_plan(groups: &str, assign: &str) -> anyhow::Result<PartitionPlan> {
    let ranges: Vec<Vec<&str>> = groups.split('|').map(|g| g.split(',').collect()).collect();
    let labels: Vec<&str> = assign.split(',').collect();
    PartitionPlan::from_ranges(&ranges, &labels, &BTreeMap::new()).context("invalid --groups")
}

enum Failure {
    Config(anyhow::Error),
    Pipeline(PipelineError),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Pipeline(e)
    }
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn compile(args: &CompileArgs) -> Result<(), Failure> {
    let circuit = match (&args.circuit, &args.bench) {
        (Some(path), _) => CircuitSource::File(path.clone()),
        (None, Some(spec)) => CircuitSource::Bench(spec.parse::<BenchmarkSpec>().map_err(anyhow::Error::from)?),
        (None, None) => return Err(anyhow::anyhow!("one of --circuit or --bench is required").into()),
    };
    let partition = match (&args.partition, &args.groups) {
        (Some(path), _) => PartitionSource::File(path.clone()),
        (None, Some(groups)) => PartitionSource::Plan(inline_plan(groups, args.assign.as_deref().unwrap_or(""))?),
        (None, None) => return Err(anyhow::anyhow!("one of --partition or --groups is required").into()),
    };
    let out = run_pipeline(&config(circuit, partition, &args.run))?;
    let table = emit_report(std::slice::from_ref(&out.metrics));
    print!("{table}");
    if let Some(dir) = &args.run.out {
        write_text(&dir.join("report.txt"), &table)?;
    }
    Ok(())
}

fn read_metrics(dir: &Path) -> anyhow::Result<MetricsReport> {
    let path = dir.join("metrics.json");
    let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed {}", path.display()))
}

fn report(args: &ReportArgs) -> Result<(), Failure> {
    let reports = args
        .dirs
        .iter()
        .map(|d| read_metrics(d))
        .collect::<anyhow::Result<Vec<_>>>()?;
    print!("{}", emit_report(&reports));
    if let Some(path) = &args.json {
        write_text(path, &emit_report_json(&reports))?;
    }
    Ok(())
}

fn suite(args: &SuiteArgs) -> Result<(), Failure> {
    let mut reports = Vec::new();
    for (i, entry) in standard_suite().into_iter().enumerate() {
        let plan = PartitionPlan::from_ranges(&entry.ranges(), entry.assignment, &BTreeMap::new())
            .map_err(anyhow::Error::from)?;
        let mut cfg = config(CircuitSource::Bench(entry.spec()), PartitionSource::Plan(plan), &args.run);
        cfg.out_dir = args
            .run
            .out
            .as_ref()
            .map(|d| d.join(format!("{:02}-{}", i + 1, entry.name.to_lowercase())));
        let mut out = run_pipeline(&cfg)?;
        out.metrics.name = entry.name.to_string();
        reports.push(out.metrics);
    }
    let table = emit_report(&reports);
    print!("{table}");
    if let Some(dir) = &args.run.out {
        write_text(&dir.join("report.txt"), &table)?;
        write_text(&dir.join("report.json"), &emit_report_json(&reports))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compile(a) => compile(a),
        Command::Report(a) => report(a),
        Command::Suite(a) => suite(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}

