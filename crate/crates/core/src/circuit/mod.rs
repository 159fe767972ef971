// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Circuit intermediate representation shared by every pipeline stage.
//!
//! A [`Circuit`] is a flat, ordered list of [`Instruction`]s over a single
//! qubit index space and a single classical-bit index space. Qubit `0` is the
//! least-significant bit wherever a bitstring or basis-state index is formed.

mod dag;
mod decompose;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dag::{CircuitDag, DagEdge, EdgeKind};
pub use decompose::{ccx_decomposition, decompose_multiqubit};

/// Identifier of a remote gate; stable across every pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RemoteId(pub u32);

impl fmt::Display for RemoteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// A gate or non-unitary operation. Rotation angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Cx,
    Cz,
    Swap,
    Ccx,
    Measure,
    Reset,
    Barrier,
    /// Opaque stand-in for a remote CX; never rewritten by local passes.
    RemotePlaceholder(RemoteId),
}

/// Parameter-free name of a [`GateKind`], used for basis sets and keep-sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateName {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Rx,
    Ry,
    Rz,
    Cx,
    Cz,
    Swap,
    Ccx,
    Measure,
    Reset,
    Barrier,
    RemotePlaceholder,
}

impl GateName {
    pub const ALL: [GateName; 20] = [
        GateName::H,
        GateName::X,
        GateName::Y,
        GateName::Z,
        GateName::S,
        GateName::Sdg,
        GateName::T,
        GateName::Tdg,
        GateName::Sx,
        GateName::Rx,
        GateName::Ry,
        GateName::Rz,
        GateName::Cx,
        GateName::Cz,
        GateName::Swap,
        GateName::Ccx,
        GateName::Measure,
        GateName::Reset,
        GateName::Barrier,
        GateName::RemotePlaceholder,
    ];

    /// Lower-case QASM spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            GateName::H => "h",
            GateName::X => "x",
            GateName::Y => "y",
            GateName::Z => "z",
            GateName::S => "s",
            GateName::Sdg => "sdg",
            GateName::T => "t",
            GateName::Tdg => "tdg",
            GateName::Sx => "sx",
            GateName::Rx => "rx",
            GateName::Ry => "ry",
            GateName::Rz => "rz",
            GateName::Cx => "cx",
            GateName::Cz => "cz",
            GateName::Swap => "swap",
            GateName::Ccx => "ccx",
            GateName::Measure => "measure",
            GateName::Reset => "reset",
            GateName::Barrier => "barrier",
            GateName::RemotePlaceholder => "remote",
        }
    }

    /// Number of qubits, or `None` for the variadic barrier and placeholder.
    pub fn num_qubits(self) -> Option<usize> {
        match self {
            GateName::Cx | GateName::Cz | GateName::Swap => Some(2),
            GateName::Ccx => Some(3),
            GateName::Barrier | GateName::RemotePlaceholder => None,
            _ => Some(1),
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(self, GateName::Rx | GateName::Ry | GateName::Rz)
    }

    /// Single-qubit unitary gate.
    pub fn is_single_qubit_gate(self) -> bool {
        matches!(
            self,
            GateName::H
                | GateName::X
                | GateName::Y
                | GateName::Z
                | GateName::S
                | GateName::Sdg
                | GateName::T
                | GateName::Tdg
                | GateName::Sx
                | GateName::Rx
                | GateName::Ry
                | GateName::Rz
        )
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateName {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateName::ALL
            .iter()
            .copied()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| CircuitError::UnknownGate(s.to_string()))
    }
}

impl GateKind {
    pub fn name(&self) -> GateName {
        match self {
            GateKind::H => GateName::H,
            GateKind::X => GateName::X,
            GateKind::Y => GateName::Y,
            GateKind::Z => GateName::Z,
            GateKind::S => GateName::S,
            GateKind::Sdg => GateName::Sdg,
            GateKind::T => GateName::T,
            GateKind::Tdg => GateName::Tdg,
            GateKind::Sx => GateName::Sx,
            GateKind::Rx(_) => GateName::Rx,
            GateKind::Ry(_) => GateName::Ry,
            GateKind::Rz(_) => GateName::Rz,
            GateKind::Cx => GateName::Cx,
            GateKind::Cz => GateName::Cz,
            GateKind::Swap => GateName::Swap,
            GateKind::Ccx => GateName::Ccx,
            GateKind::Measure => GateName::Measure,
            GateKind::Reset => GateName::Reset,
            GateKind::Barrier => GateName::Barrier,
            GateKind::RemotePlaceholder(_) => GateName::RemotePlaceholder,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(a) | GateKind::Ry(a) | GateKind::Rz(a) => Some(a),
            _ => None,
        }
    }

    /// True for gates with a unitary action (everything except measure,
    /// reset, barrier and placeholders).
    pub fn is_unitary(&self) -> bool {
        !matches!(
            self,
            GateKind::Measure | GateKind::Reset | GateKind::Barrier | GateKind::RemotePlaceholder(_)
        )
    }

    /// Number of classical bits bound by the operation.
    pub fn num_clbits(&self) -> usize {
        usize::from(matches!(self, GateKind::Measure))
    }
}

/// Classical condition `if (clbit == value)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub clbit: usize,
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub clbits: Vec<usize>,
    pub condition: Option<Condition>,
}

impl Instruction {
    pub fn new(kind: GateKind, qubits: impl Into<Vec<usize>>) -> Self {
        Self {
            kind,
            qubits: qubits.into(),
            clbits: Vec::new(),
            condition: None,
        }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Self {
            kind: GateKind::Measure,
            qubits: vec![qubit],
            clbits: vec![clbit],
            condition: None,
        }
    }

    pub fn with_condition(mut self, clbit: usize, value: bool) -> Self {
        self.condition = Some(Condition { clbit, value });
        self
    }

    /// Same instruction with qubits renamed through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Self {
        Self {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| map(q)).collect(),
            clbits: self.clbits.clone(),
            condition: self.condition,
        }
    }

    pub fn is_barrier(&self) -> bool {
        matches!(self.kind, GateKind::Barrier)
    }

    pub fn placeholder_id(&self) -> Option<RemoteId> {
        match self.kind {
            GateKind::RemotePlaceholder(id) => Some(id),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit index {index} out of range for {num_qubits}-qubit circuit")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("classical bit index {index} out of range for {num_clbits} classical bits")]
    ClbitOutOfRange { index: usize, num_clbits: usize },
    #[error("gate `{gate}` expects {expected} qubit(s), got {got}")]
    QubitArity {
        gate: GateName,
        expected: String,
        got: usize,
    },
    #[error("gate `{gate}` expects {expected} classical bit(s), got {got}")]
    ClbitArity {
        gate: GateName,
        expected: usize,
        got: usize,
    },
    #[error("gate `{gate}` repeats qubit {qubit}")]
    DuplicateQubit { gate: GateName, qubit: usize },
    #[error("gate `{gate}` cannot carry a classical condition")]
    ConditionOnNonUnitary { gate: GateName },
    #[error("gate `{gate}` has non-finite angle {angle}")]
    NonFiniteAngle { gate: GateName, angle: f64 },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("no decomposition rule for `{gate}` with keep-set lacking cx")]
    DecompositionUnsupported { gate: GateName },
}

/// Ordered instruction list over `num_qubits` qubits and `num_clbits` bits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Self {
            num_qubits,
            num_clbits,
            instructions: Vec::new(),
        }
    }

    /// Builds a circuit, validating every instruction.
    pub fn from_instructions(
        num_qubits: usize,
        num_clbits: usize,
        instructions: impl IntoIterator<Item = Instruction>,
    ) -> Result<Self, CircuitError> {
        let mut c = Self::new(num_qubits, num_clbits);
        for instr in instructions {
            c.try_push(instr)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn into_instructions(self) -> Vec<Instruction> {
        self.instructions
    }

    /// Extends the qubit index space; existing indices are unchanged.
    pub fn grow_qubits(&mut self, num_qubits: usize) {
        self.num_qubits = self.num_qubits.max(num_qubits);
    }

    pub fn grow_clbits(&mut self, num_clbits: usize) {
        self.num_clbits = self.num_clbits.max(num_clbits);
    }

    pub fn validate(&self, instr: &Instruction) -> Result<(), CircuitError> {
        let name = instr.kind.name();
        let n = instr.qubits.len();
        match name.num_qubits() {
            Some(k) if k != n => {
                return Err(CircuitError::QubitArity {
                    gate: name,
                    expected: k.to_string(),
                    got: n,
                })
            }
            None if name == GateName::Barrier && n == 0 => {
                return Err(CircuitError::QubitArity {
                    gate: name,
                    expected: "at least 1".into(),
                    got: n,
                })
            }
            None if name == GateName::RemotePlaceholder && !(1..=2).contains(&n) => {
                return Err(CircuitError::QubitArity {
                    gate: name,
                    expected: "1 or 2".into(),
                    got: n,
                })
            }
            _ => {}
        }
        for (i, &q) in instr.qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
            if instr.qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateQubit { gate: name, qubit: q });
            }
        }
        let want = instr.kind.num_clbits();
        if instr.clbits.len() != want {
            return Err(CircuitError::ClbitArity {
                gate: name,
                expected: want,
                got: instr.clbits.len(),
            });
        }
        for &b in instr.clbits.iter().chain(instr.condition.iter().map(|c| &c.clbit)) {
            if b >= self.num_clbits {
                return Err(CircuitError::ClbitOutOfRange {
                    index: b,
                    num_clbits: self.num_clbits,
                });
            }
        }
        if instr.condition.is_some() && !instr.kind.is_unitary() {
            return Err(CircuitError::ConditionOnNonUnitary { gate: name });
        }
        if let Some(a) = instr.kind.angle() {
            if !a.is_finite() {
                return Err(CircuitError::NonFiniteAngle { gate: name, angle: a });
            }
        }
        Ok(())
    }

    pub fn try_push(&mut self, instr: Instruction) -> Result<&mut Self, CircuitError> {
        self.validate(&instr)?;
        self.instructions.push(instr);
        Ok(self)
    }

    /// Appends a gate.
    ///
    /// # Panics
    /// If the instruction is invalid for this circuit; use [`Circuit::try_push`]
    /// for untrusted input.
    pub fn push(&mut self, instr: Instruction) -> &mut Self {
        if let Err(e) = self.validate(&instr) {
            panic!("invalid instruction {instr:?}: {e}");
        }
        self.instructions.push(instr);
        self
    }

    pub fn gate(&mut self, kind: GateKind, qubits: &[usize]) -> &mut Self {
        self.push(Instruction::new(kind, qubits))
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::H, &[q])
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::X, &[q])
    }

    pub fn rz(&mut self, theta: f64, q: usize) -> &mut Self {
        self.gate(GateKind::Rz(theta), &[q])
    }

    pub fn rx(&mut self, theta: f64, q: usize) -> &mut Self {
        self.gate(GateKind::Rx(theta), &[q])
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.gate(GateKind::Cx, &[control, target])
    }

    pub fn measure(&mut self, q: usize, c: usize) -> &mut Self {
        self.push(Instruction::measure(q, c))
    }

    pub fn reset(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::Reset, &[q])
    }

    pub fn barrier(&mut self, qubits: &[usize]) -> &mut Self {
        self.gate(GateKind::Barrier, qubits)
    }

    /// Set of gate names used by the circuit.
    pub fn gate_names(&self) -> BTreeSet<GateName> {
        self.instructions.iter().map(|i| i.kind.name()).collect()
    }

    pub fn placeholder_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| i.placeholder_id().is_some())
            .count()
    }

    /// Copy of the circuit with every placeholder removed.
    pub fn without_placeholders(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            num_clbits: self.num_clbits,
            instructions: self
                .instructions
                .iter()
                .filter(|i| i.placeholder_id().is_none())
                .cloned()
                .collect(),
        }
    }

    /// Indices of measurements that nothing later depends on: no later
    /// instruction touches the measured qubit, and no later instruction
    /// reads or rewrites the written bit.
    pub fn terminal_measurements(&self) -> Vec<usize> {
        let mut qubit_used = vec![false; self.num_qubits];
        let mut bit_used = vec![false; self.num_clbits];
        let mut out = Vec::new();
        for (idx, instr) in self.instructions.iter().enumerate().rev() {
            if instr.is_barrier() {
                continue;
            }
            if matches!(instr.kind, GateKind::Measure) {
                let (q, b) = (instr.qubits[0], instr.clbits[0]);
                if !qubit_used[q] && !bit_used[b] {
                    out.push(idx);
                }
            }
            for &q in &instr.qubits {
                qubit_used[q] = true;
            }
            for &b in &instr.clbits {
                bit_used[b] = true;
            }
            if let Some(c) = instr.condition {
                bit_used[c.clbit] = true;
            }
        }
        out.reverse();
        out
    }

    /// Copy without its terminal measurements.
    pub fn without_terminal_measurements(&self) -> Circuit {
        let terminal: BTreeSet<usize> = self.terminal_measurements().into_iter().collect();
        Circuit {
            num_qubits: self.num_qubits,
            num_clbits: self.num_clbits,
            instructions: self
                .instructions
                .iter()
                .enumerate()
                .filter(|(i, _)| !terminal.contains(i))
                .map(|(_, instr)| instr.clone())
                .collect(),
        }
    }

    /// For each qubit in index order, the bit written by its last measurement.
    /// Unmeasured qubits are skipped.
    pub fn output_clbits(&self) -> Vec<usize> {
        let mut last = vec![None; self.num_qubits];
        for instr in &self.instructions {
            if matches!(instr.kind, GateKind::Measure) {
                last[instr.qubits[0]] = Some(instr.clbits[0]);
            }
        }
        last.into_iter().flatten().collect()
    }

    pub fn to_dag(&self) -> CircuitDag {
        CircuitDag::from_circuit(self)
    }

    /// Longest dependency path, counting every instruction except barriers.
    pub fn depth(&self) -> usize {
        self.to_dag().depth()
    }

    /// Number of instructions excluding barriers.
    pub fn gate_count(&self) -> usize {
        self.instructions.iter().filter(|i| !i.is_barrier()).count()
    }
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

    #[test]
    fn depth_and_count_of_small_circuits() {
        assert_eq!(Circuit::new(3, 0).depth(), 0);
        assert_eq!(Circuit::new(3, 0).gate_count(), 0);
        let mut c = Circuit::new(1, 0);
        c.h(0);
        assert_eq!(c.depth(), 1);
        let mut b = Circuit::new(3, 0);
        b.barrier(&[0]).barrier(&[1, 2]).barrier(&[0, 1, 2]);
        assert_eq!(b.gate_count(), 0);
        assert_eq!(b.depth(), 0);
    }

    #[test]
    fn ghz6_depth_seven_count_twelve() {
        let c = ghz(6);
        assert_eq!(c.depth(), 7);
        assert_eq!(c.gate_count(), 12);
    }

    #[test]
    fn validation_rejects_bad_instructions() {
        let mut c = Circuit::new(2, 1);
        assert!(matches!(
            c.try_push(Instruction::new(GateKind::Cx, [0, 2])),
            Err(CircuitError::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            c.try_push(Instruction::new(GateKind::Cx, [1, 1])),
            Err(CircuitError::DuplicateQubit { .. })
        ));
        assert!(matches!(
            c.try_push(Instruction::new(GateKind::Ccx, [0, 1])),
            Err(CircuitError::QubitArity { .. })
        ));
        assert!(matches!(
            c.try_push(Instruction::measure(0, 0).with_condition(0, true)),
            Err(CircuitError::ConditionOnNonUnitary { .. })
        ));
        assert!(matches!(
            c.try_push(Instruction::new(GateKind::Rz(f64::NAN), [0])),
            Err(CircuitError::NonFiniteAngle { .. })
        ));
        assert!(matches!(
            c.try_push(Instruction::new(GateKind::X, [0]).with_condition(3, true)),
            Err(CircuitError::ClbitOutOfRange { .. })
        ));
        assert!(c.is_empty());
    }

    #[test]
    fn gate_names_round_trip_through_strings() {
        for g in GateName::ALL {
            assert_eq!(g.as_str().parse::<GateName>().unwrap(), g);
        }
        assert!("foo".parse::<GateName>().is_err());
    }

    #[test]
    fn terminal_measurements_skip_mid_circuit_ones() {
        let mut c = Circuit::new(2, 2);
        c.h(0).measure(0, 0).reset(0).h(0).measure(0, 0).measure(1, 1);
        // the first measure is followed by a reset and a rewrite of bit 0
        assert_eq!(c.terminal_measurements(), vec![4, 5]);
        assert_eq!(c.output_clbits(), vec![0, 1]);
        assert_eq!(c.without_terminal_measurements().len(), 4);
    }
}
