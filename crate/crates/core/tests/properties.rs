// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dqlayout::bench::standard_suite;
use dqlayout::circuit::decompose_multiqubit;
use dqlayout::pipeline::{run_pipeline, SimulatePolicy};
use dqlayout::qasm::{emit_layout, emit_qasm, parse_qasm};
use dqlayout::sim::{
    circuit_unitary, equal_up_to_global_phase, ideal_distribution, run_shots, total_variation,
};
use dqlayout::{Circuit, GateKind, GateName, Instruction, SimConfig};

use common::{random_full_circuit, random_unitary_circuit, suite_config};

fn full_circuit(seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_full_circuit(&mut rng, 4, 3, 30)
}

fn unitary_circuit(seed: u64, n: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_circuit(&mut rng, n, 20)
}

fn writes(i: &Instruction) -> Vec<usize> {
    if matches!(i.kind, GateKind::Measure) {
        i.clbits.clone()
    } else {
        Vec::new()
    }
}

fn reads(i: &Instruction) -> Vec<usize> {
    i.condition.iter().map(|c| c.clbit).collect()
}

/// Longest path over the pairwise dependency relation.
fn brute_force_depth(c: &Circuit) -> usize {
    let ops = c.instructions();
    let depends = |a: &Instruction, b: &Instruction| {
        a.qubits.iter().any(|q| b.qubits.contains(q))
            || writes(a).iter().any(|x| writes(b).contains(x) || reads(b).contains(x))
            || reads(a).iter().any(|x| writes(b).contains(x))
    };
    let mut longest = vec![0usize; ops.len()];
    for j in 0..ops.len() {
        let before = (0..j)
            .filter(|&i| depends(&ops[i], &ops[j]))
            .map(|i| longest[i])
            .max()
            .unwrap_or(0);
        longest[j] = before + usize::from(!ops[j].is_barrier());
    }
    longest.into_iter().max().unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qasm_round_trip(seed in any::<u64>()) {
        let c = full_circuit(seed);
        let text = emit_qasm(&c).unwrap();
        prop_assert_eq!(parse_qasm(&text).unwrap(), c);
    }

    #[test]
    fn depth_matches_brute_force(seed in any::<u64>()) {
        let c = full_circuit(seed);
        prop_assert_eq!(c.depth(), brute_force_depth(&c));
    }

    #[test]
    fn decomposition_preserves_unitary(seed in any::<u64>(), n in 3usize..=4) {
        let c = unitary_circuit(seed, n);
        let keep: BTreeSet<GateName> = [GateName::Cx].into_iter().collect();
        let lowered = decompose_multiqubit(&c, &keep).unwrap();
        let again = decompose_multiqubit(&lowered, &keep).unwrap();
        prop_assert_eq!(&again, &lowered);
        prop_assert!(!lowered.gate_names().iter().any(|g| matches!(g, GateName::Cz | GateName::Swap | GateName::Ccx)));
        let a = circuit_unitary::<f64>(&c).unwrap();
        let b = circuit_unitary::<f64>(&lowered).unwrap();
        prop_assert!(equal_up_to_global_phase(&a, &b, 1e-9));
    }

    #[test]
    fn sampling_is_seeded(seed in any::<u64>()) {
        let c = full_circuit(seed);
        let cfg = SimConfig::default();
        prop_assert_eq!(run_shots(&c, 500, seed, &cfg), run_shots(&c, 500, seed, &cfg));
    }
}

#[test]
fn sampled_distribution_converges() {
    let cfg = SimConfig::default();
    let shots = 20_000u64;
    for seed in 0..10 {
        let mut c = full_circuit(seed);
        for q in 0..c.num_qubits().min(c.num_clbits()) {
            c.measure(q, q);
        }
        let ideal = ideal_distribution(&c, &cfg).unwrap();
        let sampled = run_shots(&c, shots, seed, &cfg).unwrap();
        let k = ideal.len() as f64;
        let tv = total_variation(&ideal, &sampled);
        assert!(tv <= 5.0 * (k / shots as f64).sqrt(), "seed {seed}: tv {tv}");
    }
}

#[test]
fn comm_qubits_are_two_per_remote_gate() {
    for entry in standard_suite() {
        let mut cfg = suite_config(&entry);
        cfg.simulate = SimulatePolicy::Never;
        let out = run_pipeline(&cfg).unwrap();
        let m = &out.metrics;
        assert_eq!(m.n_comm, 2 * m.remote_gates, "{}", entry.name);
        assert_eq!(m.n_total, m.n_data + m.n_comm, "{}", entry.name);
        assert_eq!(out.layout.epr_events.len(), m.remote_gates);
        assert_eq!(out.layout.messages.len(), 2 * m.remote_gates);
    }
}

#[test]
fn pipeline_is_deterministic() {
    for entry in standard_suite().iter().take(9) {
        let cfg = suite_config(entry);
        let a = run_pipeline(&cfg).unwrap();
        let b = run_pipeline(&cfg).unwrap();
        assert_eq!(a.metrics, b.metrics, "{}", entry.name);
        assert_eq!(
            emit_layout(&a.layout, Some(&a.metrics)),
            emit_layout(&b.layout, Some(&b.metrics))
        );
    }
}

#[test]
fn bitcode_layout_document() {
    let entry = &standard_suite()[4];
    let mut cfg = suite_config(entry);
    cfg.simulate = SimulatePolicy::Never;
    let out = run_pipeline(&cfg).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&emit_layout(&out.layout, None)).unwrap();
    let qpus = doc["qpus"].as_array().unwrap();
    assert_eq!(qpus.len(), 2);
    let comm: usize = qpus.iter().map(|q| q["comm_qubits"].as_array().unwrap().len()).sum();
    let data: usize = qpus.iter().map(|q| q["data_qubits"].as_array().unwrap().len()).sum();
    assert_eq!((data, comm), (5, 4));
    assert_eq!(doc["epr_events"].as_array().unwrap().len(), 2);
    let tags: BTreeSet<&str> = doc["instructions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["tag"].as_str().unwrap())
        .collect();
    for t in ["local", "epr_prep", "telegate_cx", "classical_msg", "correction", "reset"] {
        assert!(tags.contains(t), "missing tag {t}");
    }
}
