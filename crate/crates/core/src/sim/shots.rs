// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Shot sampling.
//!
//! [`sample_counts`] walks the circuit once per distinct measurement
//! history: at every mid-circuit collapse the remaining shots are split
//! binomially between the two outcomes and each side continues with its
//! own copy of the state. Measurements that nothing depends on are deferred
//! to the leaves and sampled multinomially. The joint law of the resulting
//! histogram is exactly that of independent shots.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _};

use super::exec::{BranchEntry, Executor, OutcomeSource};
use super::{check_circuit, Counts, Distribution, SimConfig, SimError};
use crate::circuit::{Circuit, GateKind, Instruction};

/// Result of one independently simulated shot.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotResult {
    /// Output bits, most-significant first.
    pub bitstring: String,
    pub clbits: Vec<bool>,
    pub record: Vec<BranchEntry>,
}

pub(crate) fn bitstring(clbits: &[bool], keys: &[usize]) -> String {
    keys.iter()
        .rev()
        .map(|&b| if clbits[b] { '1' } else { '0' })
        .collect()
}

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).map(|b| b.sample(rng)).unwrap_or(0)
    }
}

/// Circuit split into the part that is stepped through and the measurements
/// deferred to the end.
pub(crate) struct DeferredPlan<'a> {
    pub body: Vec<(usize, &'a Instruction)>,
    pub terminal_qubits: Vec<usize>,
    pub terminal_clbits: Vec<usize>,
}

impl<'a> DeferredPlan<'a> {
    pub fn new(c: &'a Circuit) -> Self {
        let terminal = c.terminal_measurements();
        let mut body = Vec::new();
        let mut terminal_qubits = Vec::new();
        let mut terminal_clbits = Vec::new();
        let mut t = terminal.iter().peekable();
        for (i, instr) in c.instructions().iter().enumerate() {
            if t.peek() == Some(&&i) {
                t.next();
                terminal_qubits.push(instr.qubits[0]);
                terminal_clbits.push(instr.clbits[0]);
            } else if !instr.is_barrier() {
                body.push((i, instr));
            }
        }
        Self {
            body,
            terminal_qubits,
            terminal_clbits,
        }
    }
}

struct Sampler<'a> {
    plan: DeferredPlan<'a>,
    keys: &'a [usize],
    rng: ChaCha8Rng,
    counts: BTreeMap<String, u64>,
}

impl Sampler<'_> {
    fn explore(&mut self, mut ex: Executor<f64>, start: usize, mut shots: u64) -> Result<(), SimError> {
        for pc in start..self.plan.body.len() {
            let (idx, instr) = self.plan.body[pc];
            match instr.kind {
                GateKind::Measure | GateKind::Reset => {
                    let p1 = ex.state().probability_one(instr.qubits[0]).clamp(0.0, 1.0);
                    let ones = binomial(&mut self.rng, shots, p1);
                    let zeros = shots - ones;
                    if ones > 0 && zeros > 0 {
                        let mut other = ex.clone();
                        other.collapse(idx, instr, true, p1);
                        self.explore(other, pc + 1, ones)?;
                        ex.collapse(idx, instr, false, p1);
                        shots = zeros;
                    } else {
                        ex.collapse(idx, instr, ones > 0, p1);
                    }
                }
                _ => ex.apply_unitary(instr)?,
            }
        }
        self.leaf(ex, shots);
        Ok(())
    }

    fn leaf(&mut self, mut ex: Executor<f64>, shots: u64) {
        let weights = ex.state().joint_weights(&self.plan.terminal_qubits);
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        let outcomes: Vec<(u64, f64)> = weights
            .into_iter()
            .filter(|(_, w)| *w > 1e-14 * total)
            .collect();
        let mut remaining = shots;
        let mut mass: f64 = outcomes.iter().map(|(_, w)| w).sum();
        for (i, &(key, w)) in outcomes.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            let k = if i + 1 == outcomes.len() {
                remaining
            } else {
                binomial(&mut self.rng, remaining, (w / mass).clamp(0.0, 1.0))
            };
            remaining -= k;
            mass -= w;
            if k == 0 {
                continue;
            }
            for (j, &b) in self.plan.terminal_clbits.iter().enumerate() {
                ex.set_clbit(b, (key >> j) & 1 == 1);
            }
            *self
                .counts
                .entry(bitstring(ex.clbits(), self.keys))
                .or_insert(0) += k;
        }
    }
}

/// Histogram of `shots` shots keyed by the bits in `keys`.
pub fn sample_counts(
    c: &Circuit,
    shots: u64,
    seed: u64,
    keys: &[usize],
    config: &SimConfig,
) -> Result<Counts, SimError> {
    check_circuit(c, config)?;
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    if let Some(&b) = keys.iter().find(|&&b| b >= c.num_clbits()) {
        return Err(SimError::ClbitOutOfRange {
            index: b,
            num_clbits: c.num_clbits(),
        });
    }
    let mut sampler = Sampler {
        plan: DeferredPlan::new(c),
        keys,
        rng: ChaCha8Rng::seed_from_u64(seed),
        counts: BTreeMap::new(),
    };
    sampler.explore(Executor::new(c.num_qubits(), c.num_clbits()), 0, shots)?;
    Ok(Counts {
        shots,
        counts: sampler.counts,
    })
}

/// Sampled output distribution over the circuit's measured qubits
/// (last measurement of each qubit).
pub fn run_shots(
    c: &Circuit,
    shots: u64,
    seed: u64,
    config: &SimConfig,
) -> Result<Distribution, SimError> {
    run_shots_keyed(c, shots, seed, &c.output_clbits(), config)
}

pub fn run_shots_keyed(
    c: &Circuit,
    shots: u64,
    seed: u64,
    keys: &[usize],
    config: &SimConfig,
) -> Result<Distribution, SimError> {
    Ok(sample_counts(c, shots, seed, keys, config)?.to_distribution())
}

/// Simulates one shot instruction by instruction. The generator is ChaCha8
/// seeded with `seed` on stream `shot_index`, so shots are independent of
/// the order they are run in.
pub fn sample_shot(
    c: &Circuit,
    seed: u64,
    shot_index: u64,
    keys: &[usize],
    config: &SimConfig,
) -> Result<ShotResult, SimError> {
    check_circuit(c, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot_index);
    let mut ex = Executor::<f64>::new(c.num_qubits(), c.num_clbits());
    let mut source = OutcomeSource::Sample(&mut rng);
    for (i, instr) in c.instructions().iter().enumerate() {
        ex.apply(i, instr, &mut source)?;
    }
    let (_, clbits, record) = ex.into_parts();
    Ok(ShotResult {
        bitstring: bitstring(&clbits, keys),
        clbits,
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_then_measure_is_deterministic() {
        let mut c = Circuit::new(1, 1);
        c.x(0).measure(0, 0);
        let d = run_shots(&c, 100, 1, &SimConfig::default()).unwrap();
        assert_eq!(d.get("1"), 1.0);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let mut c = Circuit::new(3, 3);
        c.h(0).cx(0, 1).h(2).measure(0, 0).measure(1, 1).measure(2, 2);
        let cfg = SimConfig::default();
        let a = sample_counts(&c, 5000, 42, &[0, 1, 2], &cfg).unwrap();
        let b = sample_counts(&c, 5000, 42, &[0, 1, 2], &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 5000);
        assert!(a.counts.keys().all(|k| &k[1..] == "00" || &k[1..] == "11"));
    }

    #[test]
    fn mid_circuit_measure_feeds_condition() {
        // teleport-free sanity: measure a |+⟩, copy the bit with a conditioned X
        let mut c = Circuit::new(2, 2);
        c.h(0).measure(0, 0);
        c.push(Instruction::new(GateKind::X, [1]).with_condition(0, true));
        c.measure(1, 1);
        let d = run_shots(&c, 20_000, 3, &SimConfig::default()).unwrap();
        assert_eq!(d.get("01") + d.get("10"), 0.0);
        assert!((d.get("11") - 0.5).abs() < 0.02);
    }

    #[test]
    fn qubit_cap_is_enforced() {
        let c = Circuit::new(30, 0);
        let err = run_shots(&c, 1, 0, &SimConfig::default()).unwrap_err();
        assert!(matches!(err, SimError::TooLarge { qubits: 30, cap: 24 }));
    }

    #[test]
    fn zero_shots_rejected() {
        let c = Circuit::new(1, 0);
        assert!(matches!(
            run_shots(&c, 0, 0, &SimConfig::default()),
            Err(SimError::ZeroShots)
        ));
    }

    #[test]
    fn single_shot_records_branches() {
        let mut c = Circuit::new(1, 1);
        c.h(0).measure(0, 0);
        let s = sample_shot(&c, 9, 4, &[0], &SimConfig::default()).unwrap();
        assert_eq!(s.record.len(), 1);
        assert_eq!(s.bitstring, if s.clbits[0] { "1" } else { "0" });
        assert!((s.record[0].probability - 0.5).abs() < 1e-12);
    }
}
