// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::circuit::{GateKind, Instruction};

/// Role of an instruction in the layout document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstructionTag {
    Local,
    EprPrep,
    TelegateCx,
    ClassicalMsg,
    Correction,
    Reset,
}

/// Operands of one remote CX.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeleGateOperands {
    pub control: usize,
    pub target: usize,
    /// Control-side half of the EPR pair.
    pub e1: usize,
    /// Target-side half of the EPR pair.
    pub e2: usize,
    pub m1: usize,
    pub m2: usize,
}

/// Non-local CX from one EPR pair: Bell-pair preparation, cat-entangler on
/// the control side, cat-disentangler on the target side, then resets of
/// both halves. Always 11 instructions.
pub fn expand_telegate(ops: TeleGateOperands) -> Vec<(Instruction, InstructionTag)> {
    let TeleGateOperands {
        control: c,
        target: t,
        e1,
        e2,
        m1,
        m2,
    } = ops;
    use InstructionTag::*;
    vec![
        (Instruction::new(GateKind::H, [e1]), EprPrep),
        (Instruction::new(GateKind::Cx, [e1, e2]), EprPrep),
        (Instruction::new(GateKind::Cx, [c, e1]), TelegateCx),
        (Instruction::measure(e1, m1), ClassicalMsg),
        (Instruction::new(GateKind::X, [e2]).with_condition(m1, true), Correction),
        (Instruction::new(GateKind::Cx, [e2, t]), TelegateCx),
        (Instruction::new(GateKind::H, [e2]), ClassicalMsg),
        (Instruction::measure(e2, m2), ClassicalMsg),
        (Instruction::new(GateKind::Z, [c]).with_condition(m2, true), Correction),
        (Instruction::new(GateKind::Reset, [e1]), Reset),
        (Instruction::new(GateKind::Reset, [e2]), Reset),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::sim::{enumerate_branches, SimConfig};
    use num_complex::Complex;

    // qubits: c=0, t=1, e1=2, e2=3; bits m1=0, m2=1
    fn run(prep: &[(GateKind, usize)]) -> Vec<(f64, Vec<Complex<f64>>)> {
        let mut c = Circuit::new(4, 2);
        for &(k, q) in prep {
            c.gate(k, &[q]);
        }
        for (i, _) in expand_telegate(TeleGateOperands { control: 0, target: 1, e1: 2, e2: 3, m1: 0, m2: 1 }) {
            c.push(i);
        }
        enumerate_branches::<f64>(&c, &SimConfig::default())
            .unwrap()
            .into_iter()
            .filter(|b| b.reachable)
            .map(|b| (b.probability, b.state.amplitudes_over(&[0, 1]).unwrap()))
            .collect()
    }

    fn close(a: &[Complex<f64>], b: &[Complex<f64>]) -> bool {
        // equality up to global phase via |<a|b>| = 1
        let overlap: Complex<f64> = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        (overlap.norm() - 1.0).abs() < 1e-10
    }

    #[test]
    fn eleven_instructions() {
        let seq = expand_telegate(TeleGateOperands { control: 0, target: 1, e1: 2, e2: 3, m1: 0, m2: 1 });
        assert_eq!(seq.len(), 11);
    }

    #[test]
    fn flips_target_when_control_set() {
        let branches = run(&[(GateKind::X, 0)]);
        assert_eq!(branches.len(), 4);
        let want = [0.0, 0.0, 0.0, 1.0].map(|x| Complex::new(x, 0.0));
        for (p, s) in branches {
            assert!((p - 0.25).abs() < 1e-12);
            assert!(close(&s, &want));
        }
    }

    #[test]
    fn zero_zero_is_fixed() {
        let want = [1.0, 0.0, 0.0, 0.0].map(|x| Complex::new(x, 0.0));
        for (_, s) in run(&[]) {
            assert!(close(&s, &want));
        }
    }

    #[test]
    fn entangles_plus_state() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let want = [r, 0.0, 0.0, r].map(|x| Complex::new(x, 0.0));
        let branches = run(&[(GateKind::H, 0)]);
        assert_eq!(branches.len(), 4);
        for (_, s) in branches {
            assert!(close(&s, &want));
        }
    }
}
