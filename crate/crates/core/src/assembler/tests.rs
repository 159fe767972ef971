// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use num_complex::Complex;

use super::*;
use crate::backend::BackendRegistry;
use crate::partition::{build_groups, lower_to_remote, PartitionPlan};
use crate::scheduler::{assign_and_allocate, freeze_placeholders, schedule_remote};
use crate::sim::{enumerate_branches, ideal_distribution, run_shots_keyed, SimConfig};
use crate::transpiler::compile_subcircuit;

fn ghz(n: usize) -> Circuit {
    let mut c = Circuit::new(n, n);
    c.h(0);
    for i in 0..n - 1 {
        c.cx(i, i + 1);
    }
    for i in 0..n {
        c.measure(i, i);
    }
    c
}

fn build(c: &Circuit, parts: &[Vec<&str>], labels: &[&str]) -> (Schedule, Vec<CompiledSubcircuit>) {
    let plan = PartitionPlan::from_ranges(parts, labels, &BTreeMap::new()).unwrap();
    let (lowered, remotes) = lower_to_remote(c, &plan).unwrap();
    let groups = build_groups(&lowered, &plan).unwrap();
    let s = assign_and_allocate(&groups, &remotes, &plan, &BackendRegistry::builtin(), Mode::Expanded, c.num_clbits())
        .unwrap();
    let s = freeze_placeholders(schedule_remote(s));
    let compiled = s.qpus.iter().map(|q| compile_subcircuit(q, true).unwrap()).collect();
    (s, compiled)
}

fn ghz6() -> (Schedule, Vec<CompiledSubcircuit>) {
    build(&ghz(6), &[vec!["q0-q1"], vec!["q2-q3"], vec!["q4-q5"]], &["Q0", "Q1", "Q2"])
}

#[test]
fn ghz6_layout_shape() {
    let (s, compiled) = ghz6();
    let layout = assemble(&s, &compiled).unwrap();
    assert_eq!(layout.num_data(), 6);
    assert_eq!(layout.num_comm(), 4);
    assert_eq!(layout.num_total(), 10);
    assert_eq!(layout.global_circuit.placeholder_count(), 0);
    assert_eq!(layout.num_remote_gates(), 2);
    assert_eq!(layout.messages.len(), 4);
    assert_eq!(layout.tags.len(), layout.global_circuit.len());
    check_layout(&layout).unwrap();
    for msg in &layout.messages {
        let c = layout.global_circuit.instructions();
        assert_eq!(c[msg.producer].kind, GateKind::Measure);
        assert_eq!(c[msg.consumer].condition.unwrap().clbit, msg.message.bit);
    }
}

#[test]
fn ghz6_forced_branches_give_ghz() {
    let (s, compiled) = ghz6();
    let layout = assemble(&s, &compiled).unwrap();
    let body = layout.global_circuit.without_terminal_measurements();
    let branches = enumerate_branches::<f64>(&body, &SimConfig::default()).unwrap();
    assert_eq!(branches.len(), 16);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut reachable = 0;
    for b in branches.iter().filter(|b| b.reachable) {
        reachable += 1;
        let amps = b.state.amplitudes_over(&layout.data_final).unwrap();
        let phase = amps[0] / Complex::new(r, 0.0);
        assert!((phase.norm() - 1.0).abs() < 1e-10);
        for (i, a) in amps.iter().enumerate() {
            let want = if i == 0 || i == 63 { r } else { 0.0 };
            assert!((a - phase * want).norm() < 1e-10, "branch {:?} amp {i}", b.record);
        }
    }
    assert_eq!(reachable, 16);
}

#[test]
fn ghz6_sampled_matches_ideal() {
    let c = ghz(6);
    let (s, compiled) = ghz6();
    let layout = assemble(&s, &compiled).unwrap();
    let cfg = SimConfig::default();
    let ideal = ideal_distribution(&c, &cfg).unwrap();
    let sampled = run_shots_keyed(&layout.global_circuit, 20_000, 5, &layout.output_clbits(), &cfg).unwrap();
    assert_eq!(sampled.len(), 2);
    assert!(hellinger_ok(&ideal, &sampled));
}

fn hellinger_ok(a: &crate::sim::Distribution, b: &crate::sim::Distribution) -> bool {
    crate::sim::hellinger_fidelity(a, b) > 0.999
}

#[test]
fn no_remote_is_concatenation() {
    let mut c = Circuit::new(4, 4);
    c.h(0).cx(0, 1).x(2).cx(2, 3);
    for q in 0..4 {
        c.measure(q, q);
    }
    let (s, compiled) = build(&c, &[vec!["q0-q1"], vec!["q2-q3"]], &["Q0", "Q1"]);
    let layout = assemble(&s, &compiled).unwrap();
    assert_eq!(layout.num_comm(), 0);
    let total: usize = compiled.iter().map(|c| c.circuit.len()).sum();
    assert_eq!(layout.global_circuit.len(), total);
    assert!(layout.tags.iter().all(|&t| t == InstructionTag::Local));
    // the first QPU's instructions come first and stay on qubits 0 and 1
    let first = compiled[0].circuit.len();
    assert!(layout.global_circuit.instructions()[..first]
        .iter()
        .all(|i| i.qubits.iter().all(|&q| q < 2)));
}

#[test]
fn lost_placeholder_is_an_error() {
    let (s, mut compiled) = ghz6();
    let kept: Vec<Instruction> = compiled[2]
        .circuit
        .instructions()
        .iter()
        .filter(|i| i.placeholder_id().is_none())
        .cloned()
        .collect();
    compiled[2].circuit = Circuit::from_instructions(compiled[2].circuit.num_qubits(), compiled[2].circuit.num_clbits(), kept).unwrap();
    let err = assemble(&s, &compiled).unwrap_err();
    assert!(matches!(err, AssembleError::OrphanPlaceholder { .. }), "{err}");
}

#[test]
fn duplicate_placeholder_is_an_error() {
    let (s, mut compiled) = ghz6();
    let ph = compiled[0]
        .circuit
        .instructions()
        .iter()
        .find(|i| i.placeholder_id().is_some())
        .cloned()
        .unwrap();
    compiled[0].circuit.push(ph);
    let err = assemble(&s, &compiled).unwrap_err();
    assert!(matches!(err, AssembleError::DuplicatePlaceholder { .. }), "{err}");
}

#[test]
fn gate_count_exceeds_subcircuits() {
    let (s, compiled) = ghz6();
    let layout = assemble(&s, &compiled).unwrap();
    let m = compute_metrics(&layout, &compiled, None);
    assert!(m.gate_count > m.subcirc_gate_count);
    assert_eq!(m.n_total, m.n_data + m.n_comm);
    assert!(m.subcirc_depth_min as f64 <= m.subcirc_depth_avg && m.subcirc_depth_avg <= m.subcirc_depth_max as f64);
    assert!(m.fidelity.is_none());
}

#[test]
fn empty_layout_metrics() {
    let s = Schedule {
        mode: Mode::Expanded,
        qpus: Vec::new(),
        remotes: Vec::new(),
        bindings: BTreeMap::new(),
        epr_events: Vec::new(),
        messages: Vec::new(),
        num_circuit_clbits: 0,
        anchored: Default::default(),
    };
    let layout = assemble(&s, &[]).unwrap();
    let m = compute_metrics(&layout, &[], None);
    assert_eq!((m.n_data, m.n_comm, m.n_total, m.layout_depth, m.gate_count), (0, 0, 0, 0, 0));
    assert_eq!(m.subcirc_depth_avg, 0.0);
}

fn doc(layout: &DistributedLayout) -> serde_json::Value {
    serde_json::from_str(&crate::qasm::emit_layout(layout, None)).unwrap()
}

#[test]
fn ghz6_layout_document() {
    let (s, compiled) = ghz6();
    let layout = assemble(&s, &compiled).unwrap();
    let d = doc(&layout);
    let qpus = d["qpus"].as_array().unwrap();
    assert_eq!(qpus.len(), 3);
    let count = |key: &str| qpus.iter().map(|q| q[key].as_array().unwrap().len()).sum::<usize>();
    assert_eq!(count("data_qubits"), 6);
    assert_eq!(count("comm_qubits"), 4);
    assert_eq!(d["instructions"].as_array().unwrap().len(), layout.global_circuit.len());
    assert_eq!(crate::qasm::emit_layout(&layout, None), crate::qasm::emit_layout(&layout, None));
}

#[test]
fn single_partition_document() {
    let (s, compiled) = build(&ghz(3), &[vec!["q0-q2"]], &["Q0"]);
    let layout = assemble(&s, &compiled).unwrap();
    let d = doc(&layout);
    let qpus = d["qpus"].as_array().unwrap();
    assert_eq!(qpus.len(), 1);
    assert!(qpus[0]["comm_qubits"].as_array().unwrap().is_empty());
}
