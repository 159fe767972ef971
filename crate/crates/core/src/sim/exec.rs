// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gates::single_qubit_matrix;
use super::state::StateVector;
use super::SimError;
use crate::circuit::{GateKind, Instruction};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseKind {
    Measure,
    Reset,
}

/// One mid-circuit collapse and the probability of the observed outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchEntry {
    pub instruction: usize,
    pub qubit: usize,
    pub kind: CollapseKind,
    pub outcome: bool,
    pub probability: f64,
}

/// How a measurement picks its outcome.
pub enum OutcomeSource<'a> {
    /// Born-rule sampling from a seeded generator.
    Sample(&'a mut ChaCha8Rng),
    /// Post-select the given outcome, even if its probability is zero.
    Forced(bool),
}

/// Quantum state plus classical register, advanced one instruction at a time.
#[derive(Debug, Clone)]
pub struct Executor<T: Scalar> {
    state: StateVector<T>,
    clbits: Vec<bool>,
    record: Vec<BranchEntry>,
}

impl<T: Scalar> Executor<T> {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Self {
            state: StateVector::new(num_qubits),
            clbits: vec![false; num_clbits],
            record: Vec::new(),
        }
    }

    pub fn from_state(state: StateVector<T>, num_clbits: usize) -> Self {
        Self {
            state,
            clbits: vec![false; num_clbits],
            record: Vec::new(),
        }
    }

    pub fn from_parts(state: StateVector<T>, clbits: Vec<bool>, record: Vec<BranchEntry>) -> Self {
        Self {
            state,
            clbits,
            record,
        }
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut StateVector<T> {
        &mut self.state
    }

    pub fn clbits(&self) -> &[bool] {
        &self.clbits
    }

    pub fn set_clbit(&mut self, bit: usize, value: bool) {
        self.clbits[bit] = value;
    }

    pub fn record(&self) -> &[BranchEntry] {
        &self.record
    }

    pub fn into_parts(self) -> (StateVector<T>, Vec<bool>, Vec<BranchEntry>) {
        (self.state, self.clbits, self.record)
    }

    fn check_indices(&self, instr: &Instruction) -> Result<(), SimError> {
        let n = self.state.num_qubits();
        if let Some(&q) = instr.qubits.iter().find(|&&q| q >= n) {
            return Err(SimError::QubitOutOfRange { index: q, num_qubits: n });
        }
        let m = self.clbits.len();
        let cond = instr.condition.iter().map(|c| c.clbit);
        if let Some(b) = instr.clbits.iter().copied().chain(cond).find(|&b| b >= m) {
            return Err(SimError::ClbitOutOfRange { index: b, num_clbits: m });
        }
        Ok(())
    }

    /// Whether the instruction's classical condition (if any) holds.
    pub fn condition_holds(&self, instr: &Instruction) -> bool {
        instr
            .condition
            .is_none_or(|c| self.clbits[c.clbit] == c.value)
    }

    /// Applies a unitary gate (or barrier). Measurement and reset go
    /// through [`Executor::apply`] or the collapse helpers.
    pub fn apply_unitary(&mut self, instr: &Instruction) -> Result<(), SimError> {
        self.check_indices(instr)?;
        if !self.condition_holds(instr) {
            return Ok(());
        }
        let q = &instr.qubits;
        match instr.kind {
            GateKind::Barrier => {}
            GateKind::X => self.state.apply_x(q[0]),
            GateKind::Cx => self.state.apply_cx(q[0], q[1]),
            GateKind::Cz => self.state.apply_cz(q[0], q[1]),
            GateKind::Swap => self.state.apply_swap(q[0], q[1]),
            GateKind::Ccx => self.state.apply_ccx(q[0], q[1], q[2]),
            GateKind::RemotePlaceholder(id) => return Err(SimError::Placeholder(id)),
            GateKind::Measure | GateKind::Reset => {
                return Err(SimError::NonUnitary(instr.kind.name()))
            }
            kind => {
                let m = single_qubit_matrix::<T>(&kind)
                    .ok_or(SimError::Unrepresentable(kind.name()))?;
                self.state.apply_single(q[0], &m);
            }
        }
        Ok(())
    }

    /// Collapses `qubit` to `outcome` (renormalizing when possible) and
    /// returns the probability of that outcome.
    pub fn collapse(
        &mut self,
        index: usize,
        instr: &Instruction,
        outcome: bool,
        p_one: f64,
    ) -> f64 {
        let qubit = instr.qubits[0];
        let probability = if outcome { p_one } else { 1.0 - p_one };
        self.state.project(qubit, outcome);
        self.state.normalize();
        let kind = match instr.kind {
            GateKind::Measure => {
                self.clbits[instr.clbits[0]] = outcome;
                CollapseKind::Measure
            }
            _ => {
                self.state.clear_known(qubit);
                CollapseKind::Reset
            }
        };
        self.record.push(BranchEntry {
            instruction: index,
            qubit,
            kind,
            outcome,
            probability,
        });
        probability
    }

    /// Applies any instruction; measurements and resets draw their outcome
    /// from `source`. `index` is the instruction's position, kept in the
    /// branch record.
    pub fn apply(
        &mut self,
        index: usize,
        instr: &Instruction,
        source: &mut OutcomeSource<'_>,
    ) -> Result<(), SimError> {
        match instr.kind {
            GateKind::Measure | GateKind::Reset => {
                self.check_indices(instr)?;
                let p_one = self.state.probability_one(instr.qubits[0]).to_f64().clamp(0.0, 1.0);
                let outcome = match source {
                    OutcomeSource::Forced(b) => *b,
                    OutcomeSource::Sample(rng) => rng.random::<f64>() < p_one,
                };
                self.collapse(index, instr, outcome, p_one);
                Ok(())
            }
            _ => self.apply_unitary(instr),
        }
    }
}
