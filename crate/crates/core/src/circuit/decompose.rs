// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use super::{Circuit, CircuitError, GateKind, GateName, Instruction};

/// Standard Toffoli lowering: 6 CX, 7 T/T†, 2 H.
pub fn ccx_decomposition(a: usize, b: usize, t: usize) -> Vec<Instruction> {
    use GateKind::*;
    [
        (H, vec![t]),
        (Cx, vec![b, t]),
        (Tdg, vec![t]),
        (Cx, vec![a, t]),
        (T, vec![t]),
        (Cx, vec![b, t]),
        (Tdg, vec![t]),
        (Cx, vec![a, t]),
        (T, vec![b]),
        (T, vec![t]),
        (H, vec![t]),
        (Cx, vec![a, b]),
        (T, vec![a]),
        (Tdg, vec![b]),
        (Cx, vec![a, b]),
    ]
    .into_iter()
    .map(|(k, q)| Instruction::new(k, q))
    .collect()
}

/// Lowers CZ, SWAP and CCX to CX plus single-qubit gates unless their name
/// is in `keep`. Conditions are copied onto every emitted gate.
pub fn decompose_multiqubit(
    c: &Circuit,
    keep: &BTreeSet<GateName>,
) -> Result<Circuit, CircuitError> {
    let mut out = Circuit::new(c.num_qubits(), c.num_clbits());
    for instr in c.instructions() {
        let name = instr.kind.name();
        let lowered = match instr.kind {
            GateKind::Cz | GateKind::Swap | GateKind::Ccx if keep.contains(&name) => None,
            GateKind::Cz | GateKind::Swap | GateKind::Ccx if !keep.contains(&GateName::Cx) => {
                return Err(CircuitError::DecompositionUnsupported { gate: name });
            }
            GateKind::Cz => {
                let (a, b) = (instr.qubits[0], instr.qubits[1]);
                Some(vec![
                    Instruction::new(GateKind::H, [b]),
                    Instruction::new(GateKind::Cx, [a, b]),
                    Instruction::new(GateKind::H, [b]),
                ])
            }
            GateKind::Swap => {
                let (a, b) = (instr.qubits[0], instr.qubits[1]);
                Some(vec![
                    Instruction::new(GateKind::Cx, [a, b]),
                    Instruction::new(GateKind::Cx, [b, a]),
                    Instruction::new(GateKind::Cx, [a, b]),
                ])
            }
            GateKind::Ccx => Some(ccx_decomposition(
                instr.qubits[0],
                instr.qubits[1],
                instr.qubits[2],
            )),
            _ => None,
        };
        match lowered {
            Some(seq) => {
                for mut g in seq {
                    g.condition = instr.condition;
                    out.try_push(g)?;
                }
            }
            None => {
                out.try_push(instr.clone())?;
            }
        }
    }
    Ok(out)
}
