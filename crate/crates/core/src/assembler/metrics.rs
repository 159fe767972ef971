// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::DistributedLayout;
use crate::scheduler::Mode;
use crate::sim::{hellinger_fidelity, Distribution};
use crate::transpiler::CompiledSubcircuit;

/// Ideal and sampled output distributions of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub shots: u64,
    pub seed: u64,
    /// Monolithic circuit, exact.
    pub ideal: Distribution,
    /// Whether `ideal` was computed in exact arithmetic.
    pub ideal_exact: bool,
    /// Layout, sampled.
    pub sampled: Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateProbability {
    pub state: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub shots: u64,
    pub seed: u64,
    /// Most probable ideal outcome.
    pub state: String,
    pub iprob: f64,
    pub eprob: f64,
    pub ideal_exact: bool,
    pub top_states: Vec<StateProbability>,
    pub hellinger_fidelity: f64,
    pub error_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub name: String,
    pub partition: String,
    pub qpus: Vec<String>,
    pub mode: Mode,
    pub n_data: usize,
    pub n_comm: usize,
    pub n_total: usize,
    pub n_ancilla: usize,
    pub remote_gates: usize,
    pub subcirc_depth_min: usize,
    pub subcirc_depth_max: usize,
    pub subcirc_depth_avg: f64,
    /// Sum over subcircuits, remote gates excluded.
    pub subcirc_gate_count: usize,
    pub swaps: usize,
    pub layout_depth: usize,
    pub gate_count: usize,
    pub fidelity: Option<FidelityReport>,
    /// Why fidelity is missing, when it is.
    pub simulation: Option<String>,
}

const TOP_STATES: usize = 8;

pub fn compute_metrics(
    layout: &DistributedLayout,
    compiled: &[CompiledSubcircuit],
    sim: Option<&SimOutcome>,
) -> MetricsReport {
    let depths: Vec<usize> = compiled.iter().map(CompiledSubcircuit::depth).collect();
    let fidelity = sim.map(|s| {
        let (state, iprob) = s.ideal.mode().unwrap_or_default();
        let f = hellinger_fidelity(&s.sampled, &s.ideal);
        FidelityReport {
            shots: s.shots,
            seed: s.seed,
            eprob: s.sampled.get(&state),
            state,
            iprob,
            ideal_exact: s.ideal_exact,
            top_states: s
                .sampled
                .top(TOP_STATES)
                .into_iter()
                .map(|(state, probability)| StateProbability { state, probability })
                .collect(),
            hellinger_fidelity: f,
            error_rate: 1.0 - f,
        }
    });
    MetricsReport {
        name: String::new(),
        partition: layout.partition.clone(),
        qpus: layout
            .qpus
            .iter()
            .map(|q| format!("{}:{}", q.label, q.backend))
            .collect(),
        mode: layout.mode,
        n_data: layout.num_data(),
        n_comm: layout.num_comm(),
        n_total: layout.num_total(),
        n_ancilla: layout.num_ancilla(),
        remote_gates: layout.num_remote_gates(),
        subcirc_depth_min: depths.iter().copied().min().unwrap_or(0),
        subcirc_depth_max: depths.iter().copied().max().unwrap_or(0),
        subcirc_depth_avg: if depths.is_empty() {
            0.0
        } else {
            depths.iter().sum::<usize>() as f64 / depths.len() as f64
        },
        subcirc_gate_count: compiled.iter().map(CompiledSubcircuit::gate_count).sum(),
        swaps: compiled.iter().map(|c| c.swaps).sum(),
        layout_depth: layout.global_circuit.depth(),
        gate_count: layout.global_circuit.gate_count(),
        fidelity,
        simulation: None,
    }
}
