// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact output distributions by enumerating measurement histories.

use std::collections::BTreeMap;

use super::exec::{BranchEntry, CollapseKind, Executor};
use super::gates::representable;
use super::shots::{bitstring, DeferredPlan};
use super::state::StateVector;
use super::{check_circuit, Distribution, SimConfig, SimError};
use crate::circuit::{Circuit, GateKind, Instruction};
use crate::scalar::{QSqrt2, Scalar};

struct Explorer<'a, T: Scalar> {
    plan: DeferredPlan<'a>,
    keys: &'a [usize],
    cap: usize,
    leaves: usize,
    acc: BTreeMap<String, T>,
}

impl<T: Scalar> Explorer<'_, T> {
    // States are never renormalized, so the squared norm of a branch is its
    // probability.
    fn explore(&mut self, mut ex: Executor<T>, start: usize) -> Result<(), SimError> {
        for pc in start..self.plan.body.len() {
            let instr = self.plan.body[pc].1;
            match instr.kind {
                GateKind::Measure | GateKind::Reset => {
                    let q = instr.qubits[0];
                    let total = ex.state().norm_sqr();
                    let w1 = ex.state().weight_one(q);
                    let w0 = total.clone() - w1.clone();
                    let live1 = !(w1 / total.clone()).is_negligible();
                    let live0 = !(w0 / total).is_negligible();
                    if live0 && live1 {
                        let mut other = ex.clone();
                        collapse(&mut other, instr, true);
                        self.explore(other, pc + 1)?;
                    }
                    collapse(&mut ex, instr, live1 && !live0);
                }
                _ => ex.apply_unitary(instr)?,
            }
        }
        self.leaves += 1;
        if self.leaves > self.cap {
            return Err(SimError::BranchCap { cap: self.cap });
        }
        for (key, w) in ex.state().joint_weights(&self.plan.terminal_qubits) {
            for (j, &b) in self.plan.terminal_clbits.iter().enumerate() {
                ex.set_clbit(b, (key >> j) & 1 == 1);
            }
            let slot = self
                .acc
                .entry(bitstring(ex.clbits(), self.keys))
                .or_insert_with(T::zero);
            *slot = slot.clone() + w;
        }
        Ok(())
    }
}

fn collapse<T: Scalar>(ex: &mut Executor<T>, instr: &Instruction, outcome: bool) {
    let q = instr.qubits[0];
    ex.state_mut().project(q, outcome);
    match instr.kind {
        GateKind::Measure => ex.set_clbit(instr.clbits[0], outcome),
        _ => ex.state_mut().clear_known(q),
    }
}

fn explore_with<T: Scalar>(
    c: &Circuit,
    keys: &[usize],
    config: &SimConfig,
) -> Result<Distribution, SimError> {
    let mut explorer = Explorer::<T> {
        plan: DeferredPlan::new(c),
        keys,
        cap: config.branch_cap,
        leaves: 0,
        acc: BTreeMap::new(),
    };
    explorer.explore(Executor::new(c.num_qubits(), c.num_clbits()), 0)?;
    let probs: BTreeMap<String, f64> = explorer
        .acc
        .into_iter()
        .map(|(k, w)| (k, w.to_f64()))
        .filter(|(_, p)| *p > 0.0)
        .collect();
    let total: f64 = probs.values().sum();
    if (total - 1.0).abs() < 1e-12 {
        return Ok(Distribution::from_map_unchecked(probs));
    }
    Distribution::new(probs.into_iter().map(|(k, p)| (k, p / total)).collect())
}

/// Exact output distribution over the circuit's measured qubits.
///
/// Circuits built from Clifford+T gates and rotations by multiples of π/2
/// are evaluated in exact arithmetic; anything else falls back to `f64`.
pub fn ideal_distribution(c: &Circuit, config: &SimConfig) -> Result<Distribution, SimError> {
    ideal_distribution_keyed(c, &c.output_clbits(), config)
}

pub fn ideal_distribution_keyed(
    c: &Circuit,
    keys: &[usize],
    config: &SimConfig,
) -> Result<Distribution, SimError> {
    check_circuit(c, config)?;
    if let Some(&b) = keys.iter().find(|&&b| b >= c.num_clbits()) {
        return Err(SimError::ClbitOutOfRange {
            index: b,
            num_clbits: c.num_clbits(),
        });
    }
    if representable::<QSqrt2>(c.instructions().iter().map(|i| &i.kind)) {
        explore_with::<QSqrt2>(c, keys, config)
    } else {
        explore_with::<f64>(c, keys, config)
    }
}

/// One measurement history of a circuit.
#[derive(Debug, Clone)]
pub struct Branch<T: Scalar> {
    pub record: Vec<BranchEntry>,
    pub clbits: Vec<bool>,
    /// Final state, normalized when the scalar has square roots.
    pub state: StateVector<T>,
    pub probability: f64,
    /// False when some outcome on the path has zero probability.
    pub reachable: bool,
}

/// Every combination of measurement outcomes, including impossible ones.
/// Resets split only when both outcomes are possible.
pub fn enumerate_branches<T: Scalar>(
    c: &Circuit,
    config: &SimConfig,
) -> Result<Vec<Branch<T>>, SimError> {
    check_circuit(c, config)?;
    let measures = c
        .instructions()
        .iter()
        .filter(|i| matches!(i.kind, GateKind::Measure))
        .count();
    if measures > config.max_enumerated_measures {
        return Err(SimError::MeasureCap {
            count: measures,
            cap: config.max_enumerated_measures,
        });
    }
    let mut frontier = vec![(Executor::<T>::new(c.num_qubits(), c.num_clbits()), 1.0f64, true)];
    for (idx, instr) in c.instructions().iter().enumerate() {
        let collapsing = matches!(instr.kind, GateKind::Measure | GateKind::Reset);
        if !collapsing {
            for (ex, _, _) in &mut frontier {
                ex.apply_unitary(instr)?;
            }
            continue;
        }
        let q = instr.qubits[0];
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (ex, prob, reachable) in frontier {
            let p1 = ex.state().probability_one(q);
            let p0 = T::one() - p1.clone();
            let live = [!p0.is_negligible(), !p1.is_negligible()];
            let is_reset = matches!(instr.kind, GateKind::Reset);
            for outcome in [false, true] {
                let possible = live[usize::from(outcome)];
                if is_reset && !possible {
                    continue;
                }
                let p = if outcome { p1.to_f64() } else { p0.to_f64() };
                let mut child = ex.clone();
                if possible {
                    child.state_mut().project(q, outcome);
                    child.state_mut().normalize();
                } else {
                    child.state_mut().replace_with_basis(q, outcome);
                }
                if is_reset {
                    child.state_mut().clear_known(q);
                } else {
                    child.set_clbit(instr.clbits[0], outcome);
                }
                let (state, clbits, mut record) = child.into_parts();
                record.push(BranchEntry {
                    instruction: idx,
                    qubit: q,
                    kind: if is_reset { CollapseKind::Reset } else { CollapseKind::Measure },
                    outcome,
                    probability: if possible { p } else { 0.0 },
                });
                let child = Executor::from_parts(state, clbits, record);
                next.push((child, if possible { prob * p } else { 0.0 }, reachable && possible));
            }
        }
        if next.len() > config.branch_cap {
            return Err(SimError::BranchCap { cap: config.branch_cap });
        }
        frontier = next;
    }
    Ok(frontier
        .into_iter()
        .map(|(ex, probability, reachable)| {
            let (state, clbits, record) = ex.into_parts();
            Branch {
                record,
                clbits,
                state,
                probability,
                reachable,
            }
        })
        .collect())
}
