// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::collections::BTreeMap;

use dqlayout::bench::SuiteEntry;
use dqlayout::partition::PartitionPlan;
use dqlayout::pipeline::{CircuitSource, PartitionSource, RunConfig};
use dqlayout::{Circuit, GateKind, Instruction};
use rand::Rng;

pub fn suite_config(e: &SuiteEntry) -> RunConfig {
    let plan = PartitionPlan::from_ranges(&e.ranges(), e.assignment, &BTreeMap::new()).unwrap();
    RunConfig::new(CircuitSource::Bench(e.spec()), PartitionSource::Plan(plan))
}

fn angle(rng: &mut impl Rng) -> f64 {
    rng.random_range(-7.0..7.0)
}

/// Random unitary gate over `n` qubits (needs `n >= 3` for CCX).
pub fn random_gate(rng: &mut impl Rng, n: usize) -> Instruction {
    let q = |rng: &mut dyn rand::RngCore, k: usize| -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            let i = rng.random_range(0..pool.len());
            out.push(pool.swap_remove(i));
        }
        out
    };
    let max = if n >= 3 { 16 } else { 15 };
    let kind = match rng.random_range(0..max) {
        0 => GateKind::H,
        1 => GateKind::X,
        2 => GateKind::Y,
        3 => GateKind::Z,
        4 => GateKind::S,
        5 => GateKind::Sdg,
        6 => GateKind::T,
        7 => GateKind::Tdg,
        8 => GateKind::Sx,
        9 => GateKind::Rx(angle(rng)),
        10 => GateKind::Ry(angle(rng)),
        11 => GateKind::Rz(angle(rng)),
        12 => GateKind::Cx,
        13 => GateKind::Cz,
        14 => GateKind::Swap,
        _ => GateKind::Ccx,
    };
    let arity = match kind {
        GateKind::Cx | GateKind::Cz | GateKind::Swap => 2,
        GateKind::Ccx => 3,
        _ => 1,
    };
    Instruction::new(kind, q(rng, arity))
}

/// Measurement-free random circuit.
pub fn random_unitary_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n, 0);
    for _ in 0..len {
        c.push(random_gate(rng, n));
    }
    c
}

/// Random circuit over the whole alphabet: gates, conditioned gates,
/// measurements, resets and barriers.
pub fn random_full_circuit(rng: &mut impl Rng, n: usize, m: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n, m);
    for _ in 0..len {
        let instr = match rng.random_range(0..10) {
            0 if m > 0 => Instruction::measure(rng.random_range(0..n), rng.random_range(0..m)),
            1 => Instruction::new(GateKind::Reset, [rng.random_range(0..n)]),
            2 => {
                let k = rng.random_range(1..=n);
                let mut qs: Vec<usize> = (0..n).collect();
                qs.truncate(k);
                Instruction::new(GateKind::Barrier, qs)
            }
            3 if m > 0 => random_gate(rng, n).with_condition(rng.random_range(0..m), rng.random_bool(0.5)),
            _ => random_gate(rng, n),
        };
        c.push(instr);
    }
    c
}
