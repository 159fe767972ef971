// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! QPU assignment, communication-qubit allocation and remote-gate
//! scheduling.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{BackendError, BackendRegistry, BackendSpec};
use crate::circuit::{Circuit, CircuitError, GateKind, Instruction, RemoteId};
use crate::partition::{LogicalGroup, PartitionPlan, RemoteGate};

/// Capacity rule for communication qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Data and communication qubits must both fit on the device.
    Strict,
    /// Only data qubits must fit; communication qubits extend the index
    /// space past the device.
    #[default]
    Expanded,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Expanded => "expanded",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "expanded" => Ok(Mode::Expanded),
            other => Err(format!("unknown mode `{other}` (expected strict or expanded)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("{qpu} ({backend}) needs {needed} qubits in {mode} mode but has {available}")]
    Capacity {
        qpu: String,
        backend: String,
        mode: Mode,
        needed: usize,
        available: usize,
    },
    #[error("{groups} groups for {assignments} QPU assignments")]
    GroupMismatch { groups: usize, assignments: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// One EPR pair shared between two QPUs for one remote gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EprEvent {
    pub id: u32,
    pub remote: RemoteId,
    /// Control-side QPU (index into [`Schedule::qpus`]).
    pub qpu_a: usize,
    /// Target-side QPU.
    pub qpu_b: usize,
    /// Local comm slot on `qpu_a`.
    pub comm_a: usize,
    /// Local comm slot on `qpu_b`.
    pub comm_b: usize,
    pub ordinal: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    /// Parity of control and first EPR half; drives the X correction.
    ControlParity,
    /// X-basis outcome of the second EPR half; drives the Z correction.
    TargetPhase,
}

/// Classical bit sent between QPUs. The consumer is the correction of
/// `remote` selected by `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicalMessage {
    pub remote: RemoteId,
    pub from_qpu: usize,
    pub to_qpu: usize,
    pub bit: usize,
    pub kind: MessageKind,
}

/// Where a remote gate lives on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemoteBinding {
    pub remote: RemoteGate,
    pub ordinal: usize,
    pub control_qpu: usize,
    pub target_qpu: usize,
    /// `(local data qubit, local comm qubit)` on the control QPU.
    pub control_qubits: (usize, usize),
    /// `(local data qubit, local comm qubit)` on the target QPU.
    pub target_qubits: (usize, usize),
    /// Global classical bits `(m1, m2)`.
    pub bits: (usize, usize),
}

/// One QPU's share of the work.
#[derive(Debug, Clone, PartialEq)]
pub struct QpuPlan {
    pub label: String,
    pub backend: BackendSpec,
    pub group: usize,
    /// Global data qubits; local qubit `i < data_qubits.len()` is
    /// `data_qubits[i]`.
    pub data_qubits: Vec<usize>,
    /// Remote gates owning each comm qubit: local qubit
    /// `data_qubits.len() + k` belongs to `comm_remotes[k]`.
    pub comm_remotes: Vec<RemoteId>,
    /// Local circuit over data then comm qubits. Placeholders act on
    /// `[data, comm]`.
    pub subcircuit: Circuit,
}

impl QpuPlan {
    pub fn num_data(&self) -> usize {
        self.data_qubits.len()
    }

    pub fn num_comm(&self) -> usize {
        self.comm_remotes.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub mode: Mode,
    pub qpus: Vec<QpuPlan>,
    pub remotes: Vec<RemoteGate>,
    pub bindings: BTreeMap<RemoteId, RemoteBinding>,
    pub epr_events: Vec<EprEvent>,
    pub messages: Vec<ClassicalMessage>,
    /// Classical bits of the input circuit; TeleGate bits follow.
    pub num_circuit_clbits: usize,
    /// Placeholders that compilation must keep in place.
    pub anchored: BTreeSet<RemoteId>,
}

impl Schedule {
    pub fn num_clbits(&self) -> usize {
        self.num_circuit_clbits + 2 * self.remotes.len()
    }

    pub fn num_data(&self) -> usize {
        self.qpus.iter().map(QpuPlan::num_data).sum()
    }

    pub fn num_comm(&self) -> usize {
        self.qpus.iter().map(QpuPlan::num_comm).sum()
    }
}

/// Places each group on its backend (data qubits on the lowest physical
/// indices, comm qubits after them in remote order), checks capacity and
/// rewrites placeholders to `[data, comm]`.
pub fn assign_and_allocate(
    groups: &[LogicalGroup],
    remotes: &[RemoteGate],
    plan: &PartitionPlan,
    registry: &BackendRegistry,
    mode: Mode,
    num_circuit_clbits: usize,
) -> Result<Schedule, ScheduleError> {
    if groups.len() != plan.num_groups() {
        return Err(ScheduleError::GroupMismatch {
            groups: groups.len(),
            assignments: plan.num_groups(),
        });
    }
    let ordinal: BTreeMap<RemoteId, usize> = remotes.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
    let mut qpus = Vec::with_capacity(groups.len());
    for (group, assignment) in groups.iter().zip(plan.assignment()) {
        let backend = registry.get(&assignment.backend)?.clone();
        let n_data = group.data_qubits.len();
        let n_comm = group.remote_refs.len();
        let needed = match mode {
            Mode::Strict => n_data + n_comm,
            Mode::Expanded => n_data,
        };
        if needed > backend.num_qubits() {
            return Err(ScheduleError::Capacity {
                qpu: assignment.label.clone(),
                backend: backend.name().to_string(),
                mode,
                needed,
                available: backend.num_qubits(),
            });
        }
        let comm_slot: BTreeMap<RemoteId, usize> = group
            .remote_refs
            .iter()
            .enumerate()
            .map(|(k, &id)| (id, n_data + k))
            .collect();
        let mut sub = Circuit::new(n_data + n_comm, num_circuit_clbits);
        for instr in group.local_circuit.instructions() {
            let instr = match instr.placeholder_id() {
                Some(id) => Instruction::new(GateKind::RemotePlaceholder(id), [instr.qubits[0], comm_slot[&id]]),
                None => instr.clone(),
            };
            sub.try_push(instr)?;
        }
        qpus.push(QpuPlan {
            label: assignment.label.clone(),
            backend,
            group: group.index,
            data_qubits: group.data_qubits.clone(),
            comm_remotes: group.remote_refs.clone(),
            subcircuit: sub,
        });
    }
    let mut bindings = BTreeMap::new();
    for r in remotes {
        let ord = ordinal[&r.id];
        let local = |g: usize, q: usize| -> (usize, usize) {
            let plan = &qpus[g];
            let data = plan.data_qubits.binary_search(&q).unwrap_or_default();
            let k = plan.comm_remotes.iter().position(|&id| id == r.id).unwrap_or_default();
            (data, plan.num_data() + k)
        };
        bindings.insert(
            r.id,
            RemoteBinding {
                remote: *r,
                ordinal: ord,
                control_qpu: r.control_group,
                target_qpu: r.target_group,
                control_qubits: local(r.control_group, r.control),
                target_qubits: local(r.target_group, r.target),
                bits: (num_circuit_clbits + 2 * ord, num_circuit_clbits + 2 * ord + 1),
            },
        );
    }
    Ok(Schedule {
        mode,
        qpus,
        remotes: remotes.to_vec(),
        bindings,
        epr_events: Vec::new(),
        messages: Vec::new(),
        num_circuit_clbits,
        anchored: BTreeSet::new(),
    })
}

/// Orders EPR events by remote-gate position and registers the two
/// classical messages of each remote gate.
pub fn schedule_remote(mut schedule: Schedule) -> Schedule {
    let mut bindings: Vec<&RemoteBinding> = schedule.bindings.values().collect();
    bindings.sort_by_key(|b| b.ordinal);
    schedule.epr_events = bindings
        .iter()
        .map(|b| EprEvent {
            id: b.ordinal as u32,
            remote: b.remote.id,
            qpu_a: b.control_qpu,
            qpu_b: b.target_qpu,
            comm_a: b.control_qubits.1,
            comm_b: b.target_qubits.1,
            ordinal: b.ordinal,
        })
        .collect();
    schedule.messages = bindings
        .iter()
        .flat_map(|b| {
            [
                ClassicalMessage {
                    remote: b.remote.id,
                    from_qpu: b.control_qpu,
                    to_qpu: b.target_qpu,
                    bit: b.bits.0,
                    kind: MessageKind::ControlParity,
                },
                ClassicalMessage {
                    remote: b.remote.id,
                    from_qpu: b.target_qpu,
                    to_qpu: b.control_qpu,
                    bit: b.bits.1,
                    kind: MessageKind::TargetPhase,
                },
            ]
        })
        .collect();
    schedule
}

/// Marks every placeholder as anchored. Compilation passes treat anchored
/// placeholders as opaque, immovable instructions.
pub fn freeze_placeholders(mut schedule: Schedule) -> Schedule {
    schedule.anchored = schedule
        .qpus
        .iter()
        .flat_map(|q| q.subcircuit.instructions().iter().filter_map(Instruction::placeholder_id))
        .collect();
    schedule
}
