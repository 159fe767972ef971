// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{PI, TAU};

use crate::circuit::{Circuit, GateKind, Instruction};

const ANGLE_EPS: f64 = 1e-12;

/// Angle folded into `(-π, π]`.
fn fold(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

fn is_identity_rz(theta: f64) -> bool {
    fold(theta).abs() < ANGLE_EPS
}

fn inverse_pair(a: GateKind, b: GateKind) -> bool {
    use GateKind::*;
    matches!(
        (a, b),
        (X, X) | (Y, Y) | (Z, Z) | (H, H) | (S, Sdg) | (Sdg, S) | (T, Tdg) | (Tdg, T)
    )
}

fn mergeable(i: &Instruction) -> bool {
    i.condition.is_none() && i.kind.is_unitary() && i.qubits.len() == 1
}

/// Peephole pass: merges adjacent RZ rotations, drops identity RZ, cancels
/// self-inverse pairs and back-to-back identical CX. Measure, reset,
/// barriers, placeholders and conditioned gates are never crossed or
/// touched.
pub fn optimize_1q(c: &Circuit) -> Circuit {
    let mut slots: Vec<Option<Instruction>> = Vec::with_capacity(c.len());
    // per qubit: indices into `slots` of live instructions, latest last
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); c.num_qubits()];

    for instr in c.instructions() {
        if mergeable(instr) {
            let q = instr.qubits[0];
            if let GateKind::Rz(theta) = instr.kind {
                if is_identity_rz(theta) {
                    continue;
                }
            }
            if let Some(&j) = stacks[q].last() {
                let prev = slots[j].as_ref().filter(|p| mergeable(p));
                if let Some(prev) = prev {
                    if let (GateKind::Rz(a), GateKind::Rz(b)) = (prev.kind, instr.kind) {
                        let sum = fold(a + b);
                        if is_identity_rz(sum) {
                            slots[j] = None;
                            stacks[q].pop();
                        } else {
                            slots[j] = Some(Instruction::new(GateKind::Rz(sum), [q]));
                        }
                        continue;
                    }
                    if inverse_pair(prev.kind, instr.kind) {
                        slots[j] = None;
                        stacks[q].pop();
                        continue;
                    }
                }
            }
            stacks[q].push(slots.len());
            slots.push(Some(instr.clone()));
            continue;
        }
        if matches!(instr.kind, GateKind::Cx) && instr.condition.is_none() {
            let (a, b) = (instr.qubits[0], instr.qubits[1]);
            if let (Some(&ja), Some(&jb)) = (stacks[a].last(), stacks[b].last()) {
                let same = ja == jb
                    && slots[ja]
                        .as_ref()
                        .is_some_and(|p| p.kind == GateKind::Cx && p.condition.is_none() && p.qubits == instr.qubits);
                if same {
                    slots[ja] = None;
                    stacks[a].pop();
                    stacks[b].pop();
                    continue;
                }
            }
        }
        let idx = slots.len();
        for &q in &instr.qubits {
            stacks[q].push(idx);
        }
        slots.push(Some(instr.clone()));
    }
    Circuit::from_instructions(c.num_qubits(), c.num_clbits(), slots.into_iter().flatten())
        .unwrap_or_else(|e| unreachable!("optimization keeps instructions valid: {e}"))
}
