// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Partitioning: qubit groups, remote-CX lowering and per-group circuits.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::circuit::{decompose_multiqubit, Circuit, CircuitError, GateKind, GateName, Instruction, RemoteId};

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("partition config: at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("bad qubit range `{0}` (expected `qN` or `qA-qB`)")]
    BadRange(String),
    #[error("partition {group} is empty")]
    EmptyGroup { group: usize },
    #[error("qubit {qubit} appears in more than one partition")]
    Overlap { qubit: usize },
    #[error("qubit {qubit} is not in any partition")]
    Unassigned { qubit: usize },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    OutOfRange { qubit: usize, num_qubits: usize },
    #[error("{groups} partitions but {assignments} assignments")]
    AssignmentLength { groups: usize, assignments: usize },
    #[error("QPU label `{0}` is assigned twice")]
    DuplicateLabel(String),
    #[error("classical bit {clbit} is used by partitions {writer} and {reader}")]
    CrossPartitionClassical { clbit: usize, writer: usize, reader: usize },
    #[error("conditioned cx across partitions {0} and {1} is not supported")]
    ConditionedRemote(usize, usize),
    #[error("gate `{gate}` spans partitions and has no remote lowering")]
    UnsupportedRemote { gate: GateName },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// One QPU slot in a plan: its label (e.g. `Q0`) and backend name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpuAssignment {
    pub label: String,
    pub backend: String,
}

/// User grouping of data qubits plus the QPU each group runs on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    groups: Vec<Vec<usize>>,
    assignment: Vec<QpuAssignment>,
}

/// Backend behind the default labels `Q0`, `Q1`, `Q2`.
pub fn default_backend_alias(label: &str) -> Option<&'static str> {
    match label {
        "Q0" => Some("FakeVigoV2"),
        "Q1" => Some("FakeAthensV2"),
        "Q2" => Some("FakeLagosV2"),
        _ => None,
    }
}

/// Parses `q3`, `3`, `q0-q2` or `0-2` (inclusive).
pub fn parse_qubit_range(s: &str) -> Result<Vec<usize>, PartitionError> {
    let bad = || PartitionError::BadRange(s.to_string());
    let one = |t: &str| -> Result<usize, PartitionError> {
        let t = t.trim();
        t.strip_prefix('q').unwrap_or(t).parse::<usize>().map_err(|_| bad())
    };
    match s.split_once('-') {
        Some((a, b)) => {
            let (a, b) = (one(a)?, one(b)?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![one(s)?]),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionFile {
    partitions: Vec<Vec<String>>,
    assignment: Vec<String>,
    #[serde(default)]
    backends: BTreeMap<String, String>,
}

impl PartitionPlan {
    /// Groups are sorted; labels must be distinct. Coverage of the circuit's
    /// qubits is checked by [`PartitionPlan::validate`].
    pub fn new(groups: Vec<Vec<usize>>, assignment: Vec<QpuAssignment>) -> Result<Self, PartitionError> {
        if groups.len() != assignment.len() {
            return Err(PartitionError::AssignmentLength {
                groups: groups.len(),
                assignments: assignment.len(),
            });
        }
        let mut labels = BTreeSet::new();
        for a in &assignment {
            if !labels.insert(a.label.as_str()) {
                return Err(PartitionError::DuplicateLabel(a.label.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let mut sorted = Vec::with_capacity(groups.len());
        for (g, mut group) in groups.into_iter().enumerate() {
            if group.is_empty() {
                return Err(PartitionError::EmptyGroup { group: g });
            }
            group.sort_unstable();
            for &q in &group {
                if !seen.insert(q) {
                    return Err(PartitionError::Overlap { qubit: q });
                }
            }
            sorted.push(group);
        }
        Ok(Self {
            groups: sorted,
            assignment,
        })
    }

    /// Plan from range strings and labels, resolving labels through
    /// `backends` and then the default aliases; an unmatched label is taken
    /// to be a backend name itself.
    pub fn from_ranges(
        partitions: &[Vec<&str>],
        labels: &[&str],
        backends: &BTreeMap<String, String>,
    ) -> Result<Self, PartitionError> {
        let groups = partitions
            .iter()
            .map(|ranges| {
                let mut g = Vec::new();
                for r in ranges {
                    g.extend(parse_qubit_range(r)?);
                }
                Ok(g)
            })
            .collect::<Result<Vec<_>, PartitionError>>()?;
        let assignment = labels
            .iter()
            .map(|&label| QpuAssignment {
                label: label.to_string(),
                backend: backends
                    .get(label)
                    .cloned()
                    .or_else(|| default_backend_alias(label).map(str::to_string))
                    .unwrap_or_else(|| label.to_string()),
            })
            .collect();
        Self::new(groups, assignment)
    }

    /// Parses the JSON partition file
    /// `{partitions: [["q0-q1"], …], assignment: ["Q0", …], backends: {"Q0": "FakeVigoV2", …}}`.
    pub fn from_json_str(text: &str) -> Result<Self, PartitionError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: PartitionFile = serde_path_to_error::deserialize(de).map_err(|e| PartitionError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        let parts: Vec<Vec<&str>> = file
            .partitions
            .iter()
            .map(|g| g.iter().map(String::as_str).collect())
            .collect();
        let labels: Vec<&str> = file.assignment.iter().map(String::as_str).collect();
        Self::from_ranges(&parts, &labels, &file.backends)
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn assignment(&self) -> &[QpuAssignment] {
        &self.assignment
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    /// Group of every qubit, after checking the groups cover exactly
    /// `0..num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<Vec<usize>, PartitionError> {
        let mut owner = vec![None; num_qubits];
        for (g, group) in self.groups.iter().enumerate() {
            for &q in group {
                if q >= num_qubits {
                    return Err(PartitionError::OutOfRange { qubit: q, num_qubits });
                }
                owner[q] = Some(g);
            }
        }
        owner
            .into_iter()
            .enumerate()
            .map(|(q, g)| g.ok_or(PartitionError::Unassigned { qubit: q }))
            .collect()
    }

    /// Short form such as `q0-q1|q2-q3|q4-q5`.
    pub fn describe(&self) -> String {
        self.groups
            .iter()
            .map(|g| compress_ranges(g))
            .collect::<Vec<_>>()
            .join("|")
    }
}

pub(crate) fn compress_ranges(g: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < g.len() {
        let mut j = i;
        while j + 1 < g.len() && g[j + 1] == g[j] + 1 {
            j += 1;
        }
        parts.push(if i == j {
            format!("q{}", g[i])
        } else {
            format!("q{}-q{}", g[i], g[j])
        });
        i = j + 1;
    }
    parts.join(",")
}

/// Reads a partition file; see [`PartitionPlan::from_json_str`].
pub fn load_partition(path: impl AsRef<Path>) -> Result<PartitionPlan, PartitionError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| PartitionError::Io {
        path: path.display().to_string(),
        source,
    })?;
    PartitionPlan::from_json_str(&text)
}

/// A CX whose endpoints lie in different groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemoteGate {
    pub id: RemoteId,
    pub control: usize,
    pub target: usize,
    pub control_group: usize,
    pub target_group: usize,
}

/// Set of gates kept by the lowering: everything except CZ, SWAP and CCX.
pub fn lowering_keep_set() -> BTreeSet<GateName> {
    GateName::ALL
        .iter()
        .copied()
        .filter(|g| !matches!(g, GateName::Cz | GateName::Swap | GateName::Ccx))
        .collect()
}

/// Lowers multi-qubit gates to CX and replaces every cross-group CX by a
/// placeholder on `[control, target]`. Remote ids count up from 0 in
/// program order.
///
/// Classical bits must stay inside one group: a bit written in one group
/// and read or rewritten in another is rejected, as is a conditioned
/// cross-group CX.
pub fn lower_to_remote(c: &Circuit, plan: &PartitionPlan) -> Result<(Circuit, Vec<RemoteGate>), PartitionError> {
    let owner = plan.validate(c.num_qubits())?;
    let lowered = decompose_multiqubit(c, &lowering_keep_set())?;
    check_classical_locality(&lowered, &owner)?;
    let mut out = Circuit::new(c.num_qubits(), c.num_clbits());
    let mut remotes = Vec::new();
    for instr in lowered.instructions() {
        if instr.is_barrier() {
            out.try_push(instr.clone())?;
            continue;
        }
        let groups: BTreeSet<usize> = instr.qubits.iter().map(|&q| owner[q]).collect();
        if groups.len() <= 1 {
            out.try_push(instr.clone())?;
            continue;
        }
        match instr.kind {
            GateKind::Cx => {
                let (control, target) = (instr.qubits[0], instr.qubits[1]);
                if instr.condition.is_some() {
                    return Err(PartitionError::ConditionedRemote(owner[control], owner[target]));
                }
                let id = RemoteId(remotes.len() as u32);
                remotes.push(RemoteGate {
                    id,
                    control,
                    target,
                    control_group: owner[control],
                    target_group: owner[target],
                });
                out.try_push(Instruction::new(GateKind::RemotePlaceholder(id), [control, target]))?;
            }
            kind => return Err(PartitionError::UnsupportedRemote { gate: kind.name() }),
        }
    }
    Ok((out, remotes))
}

fn check_classical_locality(c: &Circuit, owner: &[usize]) -> Result<(), PartitionError> {
    let mut bit_group: Vec<Option<usize>> = vec![None; c.num_clbits()];
    let mut claim = |bit: usize, g: usize| -> Result<(), PartitionError> {
        match bit_group[bit] {
            Some(h) if h != g => Err(PartitionError::CrossPartitionClassical {
                clbit: bit,
                writer: h,
                reader: g,
            }),
            _ => {
                bit_group[bit] = Some(g);
                Ok(())
            }
        }
    };
    for instr in c.instructions() {
        if instr.is_barrier() {
            continue;
        }
        let g = owner[instr.qubits[0]];
        for &b in &instr.clbits {
            claim(b, g)?;
        }
        if let Some(cond) = instr.condition {
            claim(cond.clbit, g)?;
        }
    }
    Ok(())
}

/// Number of communication qubits: one EPR pair per remote gate.
pub fn count_comm_qubits(remotes: &[RemoteGate]) -> usize {
    2 * remotes.len()
}

/// One partition's share of the lowered circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalGroup {
    pub index: usize,
    /// Global data qubits in ascending order; local qubit `i` is
    /// `data_qubits[i]`.
    pub data_qubits: Vec<usize>,
    /// Instructions touching only this group, over local qubit indices and
    /// the global classical bits. A remote gate appears as a one-qubit
    /// placeholder on the local participant.
    pub local_circuit: Circuit,
    /// Remote gates touching this group, in program order.
    pub remote_refs: Vec<RemoteId>,
}

impl LogicalGroup {
    pub fn global_to_local(&self) -> BTreeMap<usize, usize> {
        self.data_qubits.iter().enumerate().map(|(l, &g)| (g, l)).collect()
    }
}

/// Projects the lowered circuit onto each group. Barriers are split into
/// per-group barriers over their local qubits.
pub fn build_groups(lowered: &Circuit, plan: &PartitionPlan) -> Result<Vec<LogicalGroup>, PartitionError> {
    let owner = plan.validate(lowered.num_qubits())?;
    let mut local = vec![0usize; lowered.num_qubits()];
    for group in plan.groups() {
        for (l, &q) in group.iter().enumerate() {
            local[q] = l;
        }
    }
    let mut groups: Vec<LogicalGroup> = plan
        .groups()
        .iter()
        .enumerate()
        .map(|(g, qs)| LogicalGroup {
            index: g,
            data_qubits: qs.clone(),
            local_circuit: Circuit::new(qs.len(), lowered.num_clbits()),
            remote_refs: Vec::new(),
        })
        .collect();
    for instr in lowered.instructions() {
        if let Some(id) = instr.placeholder_id() {
            for &q in &instr.qubits {
                let g = &mut groups[owner[q]];
                g.local_circuit
                    .try_push(Instruction::new(GateKind::RemotePlaceholder(id), [local[q]]))?;
                g.remote_refs.push(id);
            }
            continue;
        }
        if instr.is_barrier() {
            let mut per_group: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &q in &instr.qubits {
                per_group.entry(owner[q]).or_default().push(local[q]);
            }
            for (g, qs) in per_group {
                groups[g]
                    .local_circuit
                    .try_push(Instruction::new(GateKind::Barrier, qs))?;
            }
            continue;
        }
        let g = owner[instr.qubits[0]];
        groups[g]
            .local_circuit
            .try_push(instr.remapped(|q| local[q]))?;
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn plan(parts: &[&[&str]]) -> PartitionPlan {
        let parts: Vec<Vec<&str>> = parts.iter().map(|p| p.to_vec()).collect();
        let labels: Vec<String> = (0..parts.len()).map(|i| format!("Q{i}")).collect();
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        PartitionPlan::from_ranges(&parts, &labels, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_qubit_range("q0-q2").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_qubit_range("q0-q1").unwrap(), vec![0, 1]);
        assert_eq!(parse_qubit_range("q4").unwrap(), vec![4]);
        assert_eq!(parse_qubit_range("3-5").unwrap(), vec![3, 4, 5]);
        assert!(parse_qubit_range("q2-q1").is_err());
        assert!(parse_qubit_range("x").is_err());
    }

    #[test]
    fn ghz6_three_way() {
        let p = plan(&[&["q0-q1"], &["q2-q3"], &["q4-q5"]]);
        let (lowered, remotes) = lower_to_remote(&ghz(6), &p).unwrap();
        assert_eq!(remotes.len(), 2);
        assert_eq!((remotes[0].control, remotes[0].target), (1, 2));
        assert_eq!((remotes[0].control_group, remotes[0].target_group), (0, 1));
        assert_eq!((remotes[1].control, remotes[1].target), (3, 4));
        assert_eq!((remotes[1].control_group, remotes[1].target_group), (1, 2));
        assert_eq!(count_comm_qubits(&remotes), 4);
        assert_eq!(lowered.placeholder_count(), 2);

        let groups = build_groups(&lowered, &p).unwrap();
        let g0 = &groups[0].local_circuit;
        let kinds: Vec<GateName> = g0.instructions().iter().map(|i| i.kind.name()).collect();
        assert_eq!(
            kinds,
            [GateName::H, GateName::Cx, GateName::RemotePlaceholder, GateName::Measure, GateName::Measure]
        );
        assert_eq!(g0.instructions()[2].qubits, vec![1]);
        assert_eq!(groups[1].remote_refs, vec![RemoteId(0), RemoteId(1)]);
        assert_eq!(p.assignment()[2].backend, "FakeLagosV2");
        assert_eq!(p.describe(), "q0-q1|q2-q3|q4-q5");
    }

    #[test]
    fn single_group_has_no_remotes() {
        let p = plan(&[&["q0-q5"]]);
        let (lowered, remotes) = lower_to_remote(&ghz(6), &p).unwrap();
        assert!(remotes.is_empty());
        assert_eq!(lowered, ghz(6));
        let groups = build_groups(&lowered, &p).unwrap();
        assert_eq!(groups[0].local_circuit, ghz(6));
    }

    #[test]
    fn cross_cz_is_lowered_first() {
        let mut c = Circuit::new(3, 0);
        c.gate(GateKind::Cz, &[0, 2]);
        let p = plan(&[&["q0"], &["q1-q2"]]);
        let (lowered, remotes) = lower_to_remote(&c, &p).unwrap();
        let kinds: Vec<GateKind> = lowered.instructions().iter().map(|i| i.kind).collect();
        assert_eq!(kinds, vec![GateKind::H, GateKind::RemotePlaceholder(RemoteId(0)), GateKind::H]);
        assert_eq!(lowered.instructions()[0].qubits, vec![2]);
        assert_eq!((remotes[0].control, remotes[0].target), (0, 2));
    }

    #[test]
    fn idle_group_is_valid() {
        let mut c = Circuit::new(3, 0);
        c.h(0);
        let p = plan(&[&["q0-q1"], &["q2"]]);
        let (lowered, _) = lower_to_remote(&c, &p).unwrap();
        let groups = build_groups(&lowered, &p).unwrap();
        assert!(groups[1].local_circuit.is_empty());
    }

    #[test]
    fn plan_errors() {
        let labels = ["Q0", "Q1"];
        let m = BTreeMap::new();
        assert!(matches!(
            PartitionPlan::from_ranges(&[vec!["q0-q1"], vec!["q1-q2"]], &labels, &m),
            Err(PartitionError::Overlap { qubit: 1 })
        ));
        let p = PartitionPlan::from_ranges(&[vec!["q0"], vec!["q2"]], &labels, &m).unwrap();
        assert!(matches!(p.validate(3), Err(PartitionError::Unassigned { qubit: 1 })));
        assert!(matches!(p.validate(2), Err(PartitionError::OutOfRange { qubit: 2, .. })));
        assert!(matches!(
            PartitionPlan::from_ranges(&[vec!["q0"]], &labels, &m),
            Err(PartitionError::AssignmentLength { .. })
        ));
    }

    #[test]
    fn json_file() {
        let text = r#"{"partitions": [["q0-q1"], ["q2-q3"], ["q4-q5"]],
                       "assignment": ["Q0", "Q2", "Q1"],
                       "backends": {"Q0": "FakeVigoV2", "Q1": "FakeAthensV2", "Q2": "FakeLagosV2"}}"#;
        let p = PartitionPlan::from_json_str(text).unwrap();
        assert_eq!(p.assignment()[1].backend, "FakeLagosV2");
        let err = PartitionPlan::from_json_str(r#"{"partitions": [[1]], "assignment": []}"#).unwrap_err();
        match err {
            PartitionError::Schema { path, .. } => assert_eq!(path, "partitions[0][0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classical_bits_must_stay_local() {
        let mut c = Circuit::new(2, 1);
        c.measure(0, 0);
        c.push(Instruction::new(GateKind::X, [1]).with_condition(0, true));
        let p = plan(&[&["q0"], &["q1"]]);
        assert!(matches!(
            lower_to_remote(&c, &p),
            Err(PartitionError::CrossPartitionClassical { clbit: 0, .. })
        ));
    }
}
