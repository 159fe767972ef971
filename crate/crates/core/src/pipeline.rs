// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end driver: partition, schedule, compile, assemble, simulate.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::assembler::{assemble, compute_metrics, AssembleError, DistributedLayout, MetricsReport, SimOutcome};
use crate::backend::{load_registry, BackendError, BackendRegistry};
use crate::bench::{BenchError, BenchmarkSpec};
use crate::circuit::Circuit;
use crate::partition::{build_groups, load_partition, lower_to_remote, PartitionError, PartitionPlan};
use crate::qasm::{emit_layout, emit_qasm, parse_qasm, ParseError};
use crate::scalar::QSqrt2;
use crate::scheduler::{assign_and_allocate, freeze_placeholders, schedule_remote, Mode, Schedule, ScheduleError};
use crate::sim::{ideal_distribution_keyed, representable, run_shots_keyed, SimConfig, SimError};
use crate::transpiler::{compile_subcircuit, CompiledSubcircuit, TranspileError};

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitSource {
    File(PathBuf),
    Bench(BenchmarkSpec),
    Circuit { name: String, circuit: Circuit },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSource {
    File(PathBuf),
    Plan(PartitionPlan),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum BackendSource {
    #[default]
    Builtin,
    File(PathBuf),
    Registry(BackendRegistry),
}

/// When to simulate the layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimulatePolicy {
    /// Simulate when within the caps, otherwise report why not.
    #[default]
    Auto,
    /// Refusal is an error.
    Always,
    Never,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub circuit: CircuitSource,
    pub partition: PartitionSource,
    pub backends: BackendSource,
    pub mode: Mode,
    pub shots: u64,
    pub seed: u64,
    pub optimize: bool,
    pub simulate: SimulatePolicy,
    pub sim: SimConfig,
    /// Directory for the layout document, QASM and metrics.
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(circuit: CircuitSource, partition: PartitionSource) -> Self {
        Self {
            circuit,
            partition,
            backends: BackendSource::Builtin,
            mode: Mode::Expanded,
            shots: 100_000,
            seed: 1234,
            optimize: true,
            simulate: SimulatePolicy::Auto,
            sim: SimConfig::default(),
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Input,
    Partition,
    Schedule,
    Transpile,
    Assemble,
    Simulate,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Input => "input",
            Stage::Partition => "partition",
            Stage::Schedule => "schedule",
            Stage::Transpile => "transpile",
            Stage::Assemble => "assemble",
            Stage::Simulate => "simulate",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input: cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("input: {path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("input: {0}")]
    Bench(#[from] BenchError),
    #[error("input: {0}")]
    Backend(#[from] BackendError),
    #[error("partition: {0}")]
    PartitionConfig(PartitionError),
    #[error("partition: {0}")]
    Partition(PartitionError),
    #[error("schedule: {0}")]
    Schedule(#[from] ScheduleError),
    #[error("transpile: {qpu}: {source}")]
    Transpile { qpu: String, source: TranspileError },
    #[error("assemble: {0}")]
    Assemble(#[from] AssembleError),
    #[error("simulate: refused: {0}")]
    SimulationRefused(SimError),
    #[error("simulate: {0}")]
    Simulation(SimError),
    #[error("output: cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl PipelineError {
    pub fn stage(&self) -> Stage {
        match self {
            PipelineError::Read { .. }
            | PipelineError::Parse { .. }
            | PipelineError::Bench(_)
            | PipelineError::Backend(_) => Stage::Input,
            PipelineError::PartitionConfig(_) | PipelineError::Partition(_) => Stage::Partition,
            PipelineError::Schedule(_) => Stage::Schedule,
            PipelineError::Transpile { .. } => Stage::Transpile,
            PipelineError::Assemble(_) => Stage::Assemble,
            PipelineError::SimulationRefused(_) | PipelineError::Simulation(_) => Stage::Simulate,
            PipelineError::Write { .. } => Stage::Output,
        }
    }

    /// 2 for configuration errors, 3 for compilation errors, 4 when
    /// simulation was required but refused, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Read { .. }
            | PipelineError::Parse { .. }
            | PipelineError::Bench(_)
            | PipelineError::Backend(_)
            | PipelineError::PartitionConfig(_) => 2,
            PipelineError::Partition(_)
            | PipelineError::Schedule(_)
            | PipelineError::Transpile { .. }
            | PipelineError::Assemble(_) => 3,
            PipelineError::SimulationRefused(_) => 4,
            PipelineError::Simulation(_) | PipelineError::Write { .. } => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub name: String,
    pub circuit: Circuit,
    pub schedule: Schedule,
    pub compiled: Vec<CompiledSubcircuit>,
    pub layout: DistributedLayout,
    pub sim: Option<SimOutcome>,
    pub metrics: MetricsReport,
}

fn load_circuit(source: &CircuitSource) -> Result<(String, Circuit), PipelineError> {
    match source {
        CircuitSource::File(path) => {
            let text = fs::read_to_string(path).map_err(|source| PipelineError::Read {
                path: path.clone(),
                source,
            })?;
            let circuit = parse_qasm(&text).map_err(|source| PipelineError::Parse {
                path: path.clone(),
                source,
            })?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, circuit))
        }
        CircuitSource::Bench(spec) => Ok((spec.name(), spec.circuit()?)),
        CircuitSource::Circuit { name, circuit } => Ok((name.clone(), circuit.clone())),
    }
}

fn is_refusal(e: &SimError) -> bool {
    matches!(
        e,
        SimError::TooLarge { .. } | SimError::BranchCap { .. } | SimError::MeasureCap { .. }
    )
}

fn refusal_note(e: &SimError) -> String {
    match e {
        SimError::TooLarge { .. } => "not simulated (exceeds qubit cap)".to_string(),
        other => format!("not simulated ({other})"),
    }
}

fn simulate(
    circuit: &Circuit,
    layout: &DistributedLayout,
    cfg: &RunConfig,
) -> Result<SimOutcome, SimError> {
    let keys = circuit.output_clbits();
    let ideal = ideal_distribution_keyed(circuit, &keys, &cfg.sim)?;
    let sampled = run_shots_keyed(&layout.global_circuit, cfg.shots, cfg.seed, &keys, &cfg.sim)?;
    let kinds: Vec<_> = circuit.instructions().iter().map(|i| i.kind).collect();
    Ok(SimOutcome {
        shots: cfg.shots,
        seed: cfg.seed,
        ideal,
        ideal_exact: representable::<QSqrt2>(&kinds),
        sampled,
    })
}

/// Runs every stage and, when `out_dir` is set, writes `layout.json`,
/// `layout.qasm` and `metrics.json` there.
pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineOutput, PipelineError> {
    let (name, circuit) = load_circuit(&cfg.circuit)?;
    let registry = match &cfg.backends {
        BackendSource::Builtin => BackendRegistry::builtin(),
        BackendSource::File(path) => load_registry(path)?,
        BackendSource::Registry(r) => r.clone(),
    };
    let plan = match &cfg.partition {
        PartitionSource::File(path) => load_partition(path).map_err(PipelineError::PartitionConfig)?,
        PartitionSource::Plan(p) => p.clone(),
    };

    let (lowered, remotes) = lower_to_remote(&circuit, &plan).map_err(PipelineError::Partition)?;
    let groups = build_groups(&lowered, &plan).map_err(PipelineError::Partition)?;

    let schedule = assign_and_allocate(&groups, &remotes, &plan, &registry, cfg.mode, circuit.num_clbits())?;
    let schedule = freeze_placeholders(schedule_remote(schedule));

    let compiled = schedule
        .qpus
        .iter()
        .map(|q| {
            compile_subcircuit(q, cfg.optimize).map_err(|source| PipelineError::Transpile {
                qpu: q.label.clone(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let layout = assemble(&schedule, &compiled)?;

    let (sim, note) = match cfg.simulate {
        SimulatePolicy::Never => (None, Some("not simulated (disabled)".to_string())),
        policy => match simulate(&circuit, &layout, cfg) {
            Ok(outcome) => (Some(outcome), None),
            Err(e) if is_refusal(&e) && policy == SimulatePolicy::Auto => (None, Some(refusal_note(&e))),
            Err(e) if is_refusal(&e) => return Err(PipelineError::SimulationRefused(e)),
            Err(e) => return Err(PipelineError::Simulation(e)),
        },
    };
    let mut metrics = compute_metrics(&layout, &compiled, sim.as_ref());
    metrics.name = name.clone();
    metrics.simulation = note;

    let out = PipelineOutput {
        name,
        circuit,
        schedule,
        compiled,
        layout,
        sim,
        metrics,
    };
    if let Some(dir) = &cfg.out_dir {
        write_outputs(dir, &out)?;
    }
    Ok(out)
}

fn write(path: PathBuf, text: &str) -> Result<(), PipelineError> {
    fs::write(&path, text).map_err(|source| PipelineError::Write { path, source })
}

pub fn write_outputs(dir: &Path, out: &PipelineOutput) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(|source| PipelineError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    write(dir.join("layout.json"), &emit_layout(&out.layout, Some(&out.metrics)))?;
    // the assembled circuit never holds placeholders
    let qasm = emit_qasm(&out.layout.global_circuit).unwrap_or_default();
    write(dir.join("layout.qasm"), &qasm)?;
    let mut metrics = serde_json::to_string_pretty(&out.metrics).unwrap_or_default();
    metrics.push('\n');
    write(dir.join("metrics.json"), &metrics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn bench_cfg(bench: &str, parts: &[&str], labels: &[&str]) -> RunConfig {
        let ranges: Vec<Vec<&str>> = parts.iter().map(|p| vec![*p]).collect();
        let plan = PartitionPlan::from_ranges(&ranges, labels, &BTreeMap::new()).unwrap();
        let mut cfg = RunConfig::new(CircuitSource::Bench(bench.parse().unwrap()), PartitionSource::Plan(plan));
        cfg.shots = 10_000;
        cfg
    }

    #[test]
    fn ghz6_end_to_end() {
        let cfg = bench_cfg("ghz:6", &["q0-q1", "q2-q3", "q4-q5"], &["Q0", "Q1", "Q2"]);
        let out = run_pipeline(&cfg).unwrap();
        assert_eq!(out.metrics.n_data, 6);
        assert_eq!(out.metrics.n_comm, 4);
        let f = out.metrics.fidelity.unwrap();
        assert!(f.error_rate < 1e-2);
        assert_eq!(f.iprob, 0.5);
    }

    #[test]
    fn big_qaoa_is_not_simulated() {
        let cfg = bench_cfg("qaoa:10", &["q0-q3", "q4-q6", "q7-q9"], &["Q0", "Q1", "Q2"]);
        let out = run_pipeline(&cfg).unwrap();
        assert_eq!(out.metrics.n_total, 142);
        assert!(out.metrics.fidelity.is_none());
        assert_eq!(out.metrics.simulation.as_deref(), Some("not simulated (exceeds qubit cap)"));
    }

    #[test]
    fn refusal_is_an_error_when_required() {
        let mut cfg = bench_cfg("qaoa:10", &["q0-q3", "q4-q6", "q7-q9"], &["Q0", "Q1", "Q2"]);
        cfg.simulate = SimulatePolicy::Always;
        let err = run_pipeline(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert_eq!(err.stage(), Stage::Simulate);
    }

    #[test]
    fn unassigned_qubit_is_a_partition_error() {
        let cfg = bench_cfg("ghz:6", &["q0-q1", "q2-q3"], &["Q0", "Q1"]);
        let err = run_pipeline(&cfg).unwrap_err();
        assert_eq!(err.stage(), Stage::Partition);
        assert_ne!(err.exit_code(), 0);
    }

    #[test]
    fn outputs_are_deterministic() {
        let dir = std::env::temp_dir().join(format!("dqlayout-pipeline-{}", std::process::id()));
        let mut cfg = bench_cfg("bitcode:3", &["q0-q2", "q3-q4"], &["Q0", "Q1"]);
        cfg.out_dir = Some(dir.join("a"));
        run_pipeline(&cfg).unwrap();
        cfg.out_dir = Some(dir.join("b"));
        run_pipeline(&cfg).unwrap();
        for f in ["layout.json", "layout.qasm", "metrics.json"] {
            let a = fs::read(dir.join("a").join(f)).unwrap();
            let b = fs::read(dir.join("b").join(f)).unwrap();
            assert_eq!(a, b, "{f}");
        }
        let _ = fs::remove_dir_all(&dir);
    }
}
