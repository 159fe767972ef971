// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::EmitError;
use crate::circuit::{Circuit, GateKind, Instruction};

/// Angle literal with 17 significant digits; parses back to the same `f64`.
pub fn format_angle(a: f64) -> String {
    format!("{a:.16e}")
}

/// Serializes a circuit as QASM 2.0.
///
/// Qubits live in one register `q`. Classical bits live in `c` unless some
/// gate is conditioned, in which case each bit gets its own one-bit register
/// `c0`, `c1`, … so that `if (cK==1)` can address it.
pub fn emit_qasm(c: &Circuit) -> Result<String, EmitError> {
    if let Some(id) = c.instructions().iter().find_map(Instruction::placeholder_id) {
        return Err(EmitError::Placeholder(id));
    }
    let per_bit = c.instructions().iter().any(|i| i.condition.is_some());
    let bit = |b: usize| if per_bit { format!("c{b}[0]") } else { format!("c[{b}]") };
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits());
    if per_bit {
        for b in 0..c.num_clbits() {
            let _ = writeln!(out, "creg c{b}[1];");
        }
    } else if c.num_clbits() > 0 {
        let _ = writeln!(out, "creg c[{}];", c.num_clbits());
    }
    for instr in c.instructions() {
        if let Some(cond) = instr.condition {
            let _ = write!(out, "if (c{}=={}) ", cond.clbit, u8::from(cond.value));
        }
        let qubits: Vec<String> = instr.qubits.iter().map(|q| format!("q[{q}]")).collect();
        match instr.kind {
            GateKind::Measure => {
                let _ = writeln!(out, "measure {} -> {};", qubits[0], bit(instr.clbits[0]));
            }
            kind => {
                let name = kind.name();
                match kind.angle() {
                    Some(a) => {
                        let _ = write!(out, "{name}({})", format_angle(a));
                    }
                    None => out.push_str(name.as_str()),
                }
                let _ = writeln!(out, " {};", qubits.join(","));
            }
        }
    }
    Ok(out)
}
