// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Merging compiled subcircuits into one distributed layout.
//!
//! Global qubit indices: data qubits keep their circuit index, the EPR pair
//! of remote gate `k` sits at `n_data + 2k` (control side) and
//! `n_data + 2k + 1` (target side), and device slots used only as routing
//! ancillas follow.

mod metrics;
mod telegate;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, GateKind, Instruction, RemoteId};
use crate::partition::compress_ranges;
use crate::scheduler::{ClassicalMessage, EprEvent, MessageKind, Mode, Schedule};
use crate::transpiler::CompiledSubcircuit;

pub use metrics::{compute_metrics, FidelityReport, MetricsReport, SimOutcome, StateProbability};
pub use telegate::{expand_telegate, InstructionTag, TeleGateOperands};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssembleError {
    #[error("schedule has {expected} QPUs but {found} compiled subcircuits were given")]
    QpuCount { expected: usize, found: usize },
    #[error("placeholder {remote} is missing on {qpu}")]
    OrphanPlaceholder { remote: RemoteId, qpu: String },
    #[error("placeholder {remote} appears more than once on {qpu}")]
    DuplicatePlaceholder { remote: RemoteId, qpu: String },
    #[error("placeholder {remote} on {qpu} does not belong to that QPU")]
    UnknownPlaceholder { remote: RemoteId, qpu: String },
    #[error("{qpu} reaches placeholder {found} while {expected} is due")]
    MismatchedPlaceholder {
        expected: RemoteId,
        found: RemoteId,
        qpu: String,
    },
    #[error("placeholder {remote} on {qpu} has no communication qubit")]
    MissingComm { remote: RemoteId, qpu: String },
    #[error("communication qubit {qubit} is consumed twice")]
    CommReused { qubit: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitRole {
    Data,
    Comm,
    /// Device slot outside the allocation that routing passed through.
    Ancilla,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitOwner {
    pub qpu: usize,
    pub role: QubitRole,
    pub physical: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutQpu {
    pub label: String,
    pub backend: String,
    pub data_qubits: Vec<usize>,
    pub num_comm: usize,
}

/// EPR event resolved to global qubits and the index of its preparation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayoutEpr {
    #[serde(flatten)]
    pub event: EprEvent,
    pub e1: usize,
    pub e2: usize,
    pub prep: usize,
}

/// Classical message with the global instructions that produce and
/// consume its bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayoutMessage {
    #[serde(flatten)]
    pub message: ClassicalMessage,
    pub producer: usize,
    pub consumer: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributedLayout {
    pub global_circuit: Circuit,
    /// One tag per instruction of `global_circuit`.
    pub tags: Vec<InstructionTag>,
    pub ownership: Vec<QubitOwner>,
    pub qpus: Vec<LayoutQpu>,
    pub epr_events: Vec<LayoutEpr>,
    pub messages: Vec<LayoutMessage>,
    /// Clbits of the input circuit; TeleGate bits are numbered after them.
    pub num_circuit_clbits: usize,
    /// Global qubit holding each data qubit at the end of the circuit.
    pub data_final: Vec<usize>,
    pub partition: String,
    pub mode: Mode,
}

impl DistributedLayout {
    pub fn num_data(&self) -> usize {
        self.count(QubitRole::Data)
    }

    pub fn num_comm(&self) -> usize {
        self.count(QubitRole::Comm)
    }

    pub fn num_ancilla(&self) -> usize {
        self.count(QubitRole::Ancilla)
    }

    /// Data plus communication qubits.
    pub fn num_total(&self) -> usize {
        self.num_data() + self.num_comm()
    }

    pub fn num_remote_gates(&self) -> usize {
        self.epr_events.len()
    }

    fn count(&self, role: QubitRole) -> usize {
        self.ownership.iter().filter(|o| o.role == role).count()
    }

    /// QPUs touched by instruction `i`.
    pub fn instruction_qpus(&self, i: usize) -> Vec<usize> {
        self.global_circuit.instructions()[i]
            .qubits
            .iter()
            .map(|&q| self.ownership[q].qpu)
            .collect()
    }

    /// Output bits of the input circuit: the last measurement of each
    /// qubit, excluding TeleGate bits.
    pub fn output_clbits(&self) -> Vec<usize> {
        let mut bits: Vec<usize> = self
            .global_circuit
            .output_clbits()
            .into_iter()
            .filter(|&b| b < self.num_circuit_clbits)
            .collect();
        bits.sort_unstable();
        bits
    }
}

struct Merger<'a> {
    schedule: &'a Schedule,
    compiled: &'a [CompiledSubcircuit],
    slot_global: Vec<Vec<Option<usize>>>,
    cursor: Vec<usize>,
    circuit: Circuit,
    tags: Vec<InstructionTag>,
}

impl Merger<'_> {
    fn push(&mut self, instr: Instruction, tag: InstructionTag) -> Result<usize, AssembleError> {
        self.circuit.try_push(instr)?;
        self.tags.push(tag);
        Ok(self.circuit.len() - 1)
    }

    fn local(&mut self, g: usize, instr: &Instruction) -> Result<(), AssembleError> {
        let slots = &self.slot_global[g];
        let mapped = instr.remapped(|p| slots[p].unwrap_or_else(|| unreachable!("touched slots are mapped")));
        self.push(mapped, InstructionTag::Local)?;
        Ok(())
    }

    /// Emits QPU `g` up to placeholder `due` and returns its operands
    /// `(data, comm)` in global indices.
    fn advance_to(&mut self, g: usize, due: RemoteId) -> Result<(usize, usize), AssembleError> {
        let compiled = self.compiled;
        let c = &compiled[g].circuit;
        let qpu = || compiled[g].qpu.clone();
        while self.cursor[g] < c.len() {
            let instr = &c.instructions()[self.cursor[g]];
            self.cursor[g] += 1;
            match instr.placeholder_id() {
                None => self.local(g, instr)?,
                Some(id) if id == due => {
                    let slots = &self.slot_global[g];
                    let comm = instr
                        .qubits
                        .get(1)
                        .and_then(|&p| slots[p])
                        .ok_or(AssembleError::MissingComm { remote: id, qpu: qpu() })?;
                    let data = slots[instr.qubits[0]].unwrap_or_else(|| unreachable!("touched slots are mapped"));
                    return Ok((data, comm));
                }
                Some(found) => {
                    return Err(AssembleError::MismatchedPlaceholder {
                        expected: due,
                        found,
                        qpu: qpu(),
                    })
                }
            }
        }
        Err(AssembleError::OrphanPlaceholder { remote: due, qpu: qpu() })
    }
}

fn check_placeholders(schedule: &Schedule, compiled: &[CompiledSubcircuit]) -> Result<(), AssembleError> {
    let mut seen: BTreeMap<RemoteId, BTreeSet<usize>> = BTreeMap::new();
    for (g, sub) in compiled.iter().enumerate() {
        let mut here = BTreeSet::new();
        for id in sub.circuit.instructions().iter().filter_map(Instruction::placeholder_id) {
            let qpu = || sub.qpu.clone();
            let binding = schedule
                .bindings
                .get(&id)
                .ok_or(AssembleError::UnknownPlaceholder { remote: id, qpu: qpu() })?;
            if binding.control_qpu != g && binding.target_qpu != g {
                return Err(AssembleError::UnknownPlaceholder { remote: id, qpu: qpu() });
            }
            if !here.insert(id) {
                return Err(AssembleError::DuplicatePlaceholder { remote: id, qpu: qpu() });
            }
            seen.entry(id).or_default().insert(g);
        }
    }
    for (id, b) in &schedule.bindings {
        let sides = seen.get(id);
        for g in [b.control_qpu, b.target_qpu] {
            if !sides.is_some_and(|s| s.contains(&g)) {
                return Err(AssembleError::OrphanPlaceholder {
                    remote: *id,
                    qpu: compiled[g].qpu.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Builds the global circuit. For each remote gate in order, the control
/// QPU is emitted up to its placeholder, then the target QPU, then the
/// TeleGate expansion; remaining instructions follow in QPU order.
pub fn assemble(schedule: &Schedule, compiled: &[CompiledSubcircuit]) -> Result<DistributedLayout, AssembleError> {
    if compiled.len() != schedule.qpus.len() {
        return Err(AssembleError::QpuCount {
            expected: schedule.qpus.len(),
            found: compiled.len(),
        });
    }
    check_placeholders(schedule, compiled)?;

    let n_data = schedule.num_data();
    let n_comm = schedule.num_comm();
    let mut ownership: Vec<Option<QubitOwner>> = vec![None; n_data + n_comm];
    let mut slot_global = Vec::with_capacity(compiled.len());
    let mut ancillas = Vec::new();
    for (g, (plan, sub)) in schedule.qpus.iter().zip(compiled).enumerate() {
        let width = sub.circuit.num_qubits();
        let mut touched = vec![false; width];
        for instr in sub.circuit.instructions() {
            for &q in &instr.qubits {
                touched[q] = true;
            }
        }
        let mut slots = vec![None; width];
        for (p, slot) in slots.iter_mut().enumerate() {
            let (global, role) = if p < plan.num_data() {
                (plan.data_qubits[p], QubitRole::Data)
            } else if p < plan.num_data() + plan.num_comm() {
                let b = &schedule.bindings[&plan.comm_remotes[p - plan.num_data()]];
                let side = usize::from(b.control_qpu != g);
                (n_data + 2 * b.ordinal + side, QubitRole::Comm)
            } else if touched[p] {
                ancillas.push(QubitOwner {
                    qpu: g,
                    role: QubitRole::Ancilla,
                    physical: p,
                });
                (n_data + n_comm + ancillas.len() - 1, QubitRole::Ancilla)
            } else {
                continue;
            };
            *slot = Some(global);
            if role != QubitRole::Ancilla {
                ownership[global] = Some(QubitOwner { qpu: g, role, physical: p });
            }
        }
        slot_global.push(slots);
    }
    let mut ownership: Vec<QubitOwner> = ownership
        .into_iter()
        .map(|o| o.unwrap_or_else(|| unreachable!("data and comm indices are dense")))
        .collect();
    ownership.extend(ancillas);

    let mut m = Merger {
        schedule,
        compiled,
        slot_global,
        cursor: vec![0; compiled.len()],
        circuit: Circuit::new(ownership.len(), schedule.num_clbits()),
        tags: Vec::new(),
    };
    let mut bindings: Vec<_> = m.schedule.bindings.values().collect();
    bindings.sort_by_key(|b| b.ordinal);
    let mut consumed = BTreeSet::new();
    let mut epr_events = Vec::new();
    let mut messages = Vec::new();
    for b in bindings {
        let id = b.remote.id;
        let (control, e1) = m.advance_to(b.control_qpu, id)?;
        let (target, e2) = m.advance_to(b.target_qpu, id)?;
        for e in [e1, e2] {
            if !consumed.insert(e) {
                return Err(AssembleError::CommReused { qubit: e });
            }
        }
        let (m1, m2) = b.bits;
        let base = m.circuit.len();
        for (instr, tag) in expand_telegate(TeleGateOperands {
            control,
            target,
            e1,
            e2,
            m1,
            m2,
        }) {
            m.push(instr, tag)?;
        }
        if let Some(event) = schedule.epr_events.iter().find(|e| e.remote == id) {
            epr_events.push(LayoutEpr {
                event: *event,
                e1,
                e2,
                prep: base,
            });
        }
        for msg in schedule.messages.iter().filter(|msg| msg.remote == id) {
            let (producer, consumer) = match msg.kind {
                MessageKind::ControlParity => (base + 3, base + 4),
                MessageKind::TargetPhase => (base + 7, base + 8),
            };
            messages.push(LayoutMessage {
                message: *msg,
                producer,
                consumer,
            });
        }
    }
    for (g, sub) in compiled.iter().enumerate() {
        while m.cursor[g] < sub.circuit.len() {
            let instr = &sub.circuit.instructions()[m.cursor[g]];
            m.cursor[g] += 1;
            if let Some(remote) = instr.placeholder_id() {
                return Err(AssembleError::DuplicatePlaceholder {
                    remote,
                    qpu: sub.qpu.clone(),
                });
            }
            m.local(g, instr)?;
        }
    }

    let mut data_final = vec![0; n_data];
    for (g, (plan, sub)) in schedule.qpus.iter().zip(compiled).enumerate() {
        for (l, &q) in plan.data_qubits.iter().enumerate() {
            let p = sub.final_map.physical(l);
            data_final[q] = m.slot_global[g][p].unwrap_or(q);
        }
    }
    let groups: Vec<String> = schedule.qpus.iter().map(|q| compress_ranges(&q.data_qubits)).collect();
    Ok(DistributedLayout {
        global_circuit: m.circuit,
        tags: m.tags,
        ownership,
        qpus: schedule
            .qpus
            .iter()
            .map(|q| LayoutQpu {
                label: q.label.clone(),
                backend: q.backend.name().to_string(),
                data_qubits: q.data_qubits.clone(),
                num_comm: q.num_comm(),
            })
            .collect(),
        epr_events,
        messages,
        num_circuit_clbits: schedule.num_circuit_clbits,
        data_final,
        partition: groups.join("|"),
        mode: schedule.mode,
    })
}

/// Checks the structural invariants of a layout: no placeholders, every
/// comm qubit prepared exactly once and reset at the end.
pub fn check_layout(layout: &DistributedLayout) -> Result<(), String> {
    let c = &layout.global_circuit;
    if let Some(id) = c.instructions().iter().find_map(Instruction::placeholder_id) {
        return Err(format!("placeholder {id} remains"));
    }
    for (q, owner) in layout.ownership.iter().enumerate() {
        if owner.role != QubitRole::Comm {
            continue;
        }
        let ops: Vec<(usize, &Instruction)> = c
            .instructions()
            .iter()
            .enumerate()
            .filter(|(_, i)| i.qubits.contains(&q))
            .collect();
        let events: Vec<&LayoutEpr> = layout.epr_events.iter().filter(|e| e.e1 == q || e.e2 == q).collect();
        if events.len() != 1 {
            return Err(format!("comm qubit {q} belongs to {} EPR pairs", events.len()));
        }
        let prep = events[0].prep;
        if ops
            .iter()
            .any(|(i, _)| layout.tags[*i] == InstructionTag::EprPrep && !(prep..prep + 2).contains(i))
        {
            return Err(format!("comm qubit {q} is prepared more than once"));
        }
        if !ops.last().is_some_and(|(_, i)| i.kind == GateKind::Reset) {
            return Err(format!("comm qubit {q} is not reset"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
