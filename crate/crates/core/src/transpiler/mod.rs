// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-QPU compilation: routing, basis translation and peephole
//! optimization. Placeholders are anchored throughout.

mod optimize;
mod route;
mod translate;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::backend::BackendSpec;
use crate::circuit::{Circuit, CircuitError, GateName, RemoteId};
use crate::scheduler::QpuPlan;

pub use optimize::optimize_1q;
pub use route::{route, QubitMap, Routed};
pub use translate::translate_basis;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranspileError {
    #[error("basis must contain rz, cx and one of sx or rx")]
    UnsupportedBasis,
    #[error("no translation rule for `{gate}` (lower it before translation)")]
    NoRule { gate: GateName },
    #[error("`{gate}` acts on more than two qubits; lower it before routing")]
    TooManyQubits { gate: GateName },
    #[error("logical qubit {qubit} is not on the device")]
    OffDevice { qubit: usize },
    #[error("no path between physical qubits {a} and {b}")]
    Unroutable { a: usize, b: usize },
    #[error("circuit has {qubits} qubits but the map has {slots} slots")]
    MapTooSmall { qubits: usize, slots: usize },
    #[error("placeholder {0} was lost during compilation")]
    LostPlaceholder(RemoteId),
    #[error("gate `{gate}` on physical qubits {qubits:?} violates the target")]
    Nonconforming { gate: GateName, qubits: Vec<usize> },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Where a placeholder ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaceholderPosition {
    pub index: usize,
    pub data_physical: usize,
    pub comm_physical: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledSubcircuit {
    pub qpu: String,
    pub backend: String,
    /// Circuit over physical slots; slots past the device hold comm qubits.
    pub circuit: Circuit,
    pub initial_map: QubitMap,
    pub final_map: QubitMap,
    pub placeholder_positions: BTreeMap<RemoteId, PlaceholderPosition>,
    pub num_data: usize,
    pub num_comm: usize,
    pub swaps: usize,
}

impl CompiledSubcircuit {
    /// The compiled circuit with placeholders dropped.
    pub fn without_remote_gates(&self) -> Circuit {
        self.circuit.without_placeholders()
    }

    pub fn depth(&self) -> usize {
        self.without_remote_gates().depth()
    }

    pub fn gate_count(&self) -> usize {
        self.without_remote_gates().gate_count()
    }
}

/// Routes, translates and (optionally) optimizes one QPU's subcircuit.
/// Logical data qubit `i` starts on physical `i` and comm qubit `k` on
/// `num_data + k`.
pub fn compile_subcircuit(plan: &QpuPlan, optimize: bool) -> Result<CompiledSubcircuit, TranspileError> {
    let spec = &plan.backend;
    let sub = &plan.subcircuit;
    let width = spec.num_qubits().max(sub.num_qubits());
    let initial = QubitMap::identity(width);
    let routed = route(sub, spec, &initial, plan.num_data())?;
    let translated = translate_basis(&routed.circuit, spec.basis_gates())?;
    let circuit = if optimize { optimize_1q(&translated) } else { translated };
    let placeholder_positions = route::placeholder_positions(&circuit);
    for id in sub.instructions().iter().filter_map(|i| i.placeholder_id()) {
        if !placeholder_positions.contains_key(&id) {
            return Err(TranspileError::LostPlaceholder(id));
        }
    }
    let compiled = CompiledSubcircuit {
        qpu: plan.label.clone(),
        backend: spec.name().to_string(),
        circuit,
        initial_map: initial,
        final_map: routed.final_map,
        placeholder_positions,
        num_data: plan.num_data(),
        num_comm: plan.num_comm(),
        swaps: routed.swaps,
    };
    check_conformance(&compiled.circuit, spec)?;
    Ok(compiled)
}

/// Every gate other than placeholders, measure, reset and barrier must be
/// native and every such two-qubit gate must sit on a coupling edge.
pub fn check_conformance(c: &Circuit, spec: &BackendSpec) -> Result<(), TranspileError> {
    for instr in c.instructions() {
        if instr.placeholder_id().is_some() {
            continue;
        }
        let name = instr.kind.name();
        let bad = !spec.allows(name)
            || (instr.kind.is_unitary()
                && instr.qubits.len() == 2
                && !spec.is_coupled(instr.qubits[0], instr.qubits[1]))
            || (instr.kind.is_unitary() && instr.qubits.len() > 2);
        if bad {
            return Err(TranspileError::Nonconforming {
                gate: name,
                qubits: instr.qubits.clone(),
            });
        }
    }
    Ok(())
}
