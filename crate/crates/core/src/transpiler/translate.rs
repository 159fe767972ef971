// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::TranspileError;
use crate::circuit::{Circuit, GateKind, GateName, Instruction};

/// Which native family a basis belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// `{rz, sx, (x), cx}`
    Sx,
    /// `{rz, rx, cx}`
    Rx,
}

fn family(basis: &BTreeSet<GateName>) -> Result<Family, TranspileError> {
    let has = |g| basis.contains(&g);
    if !has(GateName::Rz) || !has(GateName::Cx) {
        return Err(TranspileError::UnsupportedBasis);
    }
    if has(GateName::Sx) {
        Ok(Family::Sx)
    } else if has(GateName::Rx) {
        Ok(Family::Rx)
    } else {
        Err(TranspileError::UnsupportedBasis)
    }
}

/// Single-qubit rewrite into `basis`, as a gate sequence in time order.
fn rewrite_1q(kind: GateKind, basis: &BTreeSet<GateName>, fam: Family) -> Vec<GateKind> {
    if basis.contains(&kind.name()) {
        return vec![kind];
    }
    let sx_or_rx = || match fam {
        Family::Sx => GateKind::Sx,
        Family::Rx => GateKind::Rx(FRAC_PI_2),
    };
    let expand = |seq: Vec<GateKind>| -> Vec<GateKind> {
        seq.into_iter().flat_map(|k| rewrite_1q(k, basis, fam)).collect()
    };
    match kind {
        GateKind::H => vec![GateKind::Rz(FRAC_PI_2), sx_or_rx(), GateKind::Rz(FRAC_PI_2)],
        GateKind::X => match fam {
            Family::Sx => vec![GateKind::Sx, GateKind::Sx],
            Family::Rx => vec![GateKind::Rx(PI)],
        },
        GateKind::Sx => vec![GateKind::Rx(FRAC_PI_2)],
        GateKind::Y => expand(vec![GateKind::Rz(PI), GateKind::X]),
        GateKind::Z => vec![GateKind::Rz(PI)],
        GateKind::S => vec![GateKind::Rz(FRAC_PI_2)],
        GateKind::Sdg => vec![GateKind::Rz(-FRAC_PI_2)],
        GateKind::T => vec![GateKind::Rz(FRAC_PI_4)],
        GateKind::Tdg => vec![GateKind::Rz(-FRAC_PI_4)],
        GateKind::Rx(theta) => vec![
            GateKind::Rz(FRAC_PI_2),
            GateKind::Sx,
            GateKind::Rz(theta + PI),
            GateKind::Sx,
            GateKind::Rz(FRAC_PI_2),
        ],
        GateKind::Ry(theta) => expand(vec![GateKind::Rz(-FRAC_PI_2), GateKind::Rx(theta), GateKind::Rz(FRAC_PI_2)]),
        other => vec![other],
    }
}

/// Rewrites every gate into `basis`. Measure, reset, barrier and
/// placeholders pass through; SWAP becomes three CX. CZ and CCX must have
/// been lowered already. Conditions are copied to each emitted gate.
pub fn translate_basis(c: &Circuit, basis: &BTreeSet<GateName>) -> Result<Circuit, TranspileError> {
    let fam = family(basis)?;
    let mut out = Circuit::new(c.num_qubits(), c.num_clbits());
    for instr in c.instructions() {
        let name = instr.kind.name();
        match instr.kind {
            GateKind::Measure | GateKind::Reset | GateKind::Barrier | GateKind::RemotePlaceholder(_) => {
                out.try_push(instr.clone())?;
            }
            _ if basis.contains(&name) => {
                out.try_push(instr.clone())?;
            }
            GateKind::Swap => {
                let (a, b) = (instr.qubits[0], instr.qubits[1]);
                for qs in [[a, b], [b, a], [a, b]] {
                    let mut g = Instruction::new(GateKind::Cx, qs);
                    g.condition = instr.condition;
                    out.try_push(g)?;
                }
            }
            GateKind::Cz | GateKind::Ccx | GateKind::Cx => {
                return Err(TranspileError::NoRule { gate: name });
            }
            kind => {
                for k in rewrite_1q(kind, basis, fam) {
                    let mut g = Instruction::new(k, instr.qubits.clone());
                    g.condition = instr.condition;
                    out.try_push(g)?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{circuit_unitary, equal_up_to_global_phase};

    fn ibm() -> BTreeSet<GateName> {
        [GateName::Rz, GateName::Sx, GateName::X, GateName::Cx].into()
    }

    fn rx_family() -> BTreeSet<GateName> {
        [GateName::Rz, GateName::Rx, GateName::Cx].into()
    }

    fn same(a: &Circuit, b: &Circuit) -> bool {
        equal_up_to_global_phase(
            &circuit_unitary::<f64>(a).unwrap(),
            &circuit_unitary::<f64>(b).unwrap(),
            1e-12,
        )
    }

    #[test]
    fn hadamard_rule() {
        let mut c = Circuit::new(1, 0);
        c.h(0);
        let t = translate_basis(&c, &ibm()).unwrap();
        let kinds: Vec<GateKind> = t.instructions().iter().map(|i| i.kind).collect();
        assert_eq!(kinds, vec![GateKind::Rz(FRAC_PI_2), GateKind::Sx, GateKind::Rz(FRAC_PI_2)]);
        assert!(same(&c, &t));
    }

    #[test]
    fn every_rule_preserves_the_matrix() {
        let kinds = [
            GateKind::H,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
            GateKind::T,
            GateKind::Tdg,
            GateKind::Sx,
            GateKind::Rx(0.37),
            GateKind::Ry(-1.2),
            GateKind::Rz(2.5),
        ];
        for basis in [ibm(), rx_family()] {
            for k in kinds {
                let mut c = Circuit::new(1, 0);
                c.gate(k, &[0]);
                let t = translate_basis(&c, &basis).unwrap();
                assert!(t.instructions().iter().all(|i| basis.contains(&i.kind.name())), "{k:?}");
                assert!(same(&c, &t), "{k:?} in {basis:?}");
            }
        }
    }

    #[test]
    fn swap_becomes_three_cx() {
        let mut c = Circuit::new(2, 0);
        c.gate(GateKind::Swap, &[0, 1]);
        let t = translate_basis(&c, &ibm()).unwrap();
        assert_eq!(t.len(), 3);
        assert!(same(&c, &t));
    }

    #[test]
    fn native_rz_is_unchanged() {
        let mut c = Circuit::new(1, 0);
        c.rz(0.3, 0);
        assert_eq!(translate_basis(&c, &ibm()).unwrap(), c);
    }

    #[test]
    fn cz_is_rejected() {
        let mut c = Circuit::new(2, 0);
        c.gate(GateKind::Cz, &[0, 1]);
        assert!(matches!(
            translate_basis(&c, &ibm()),
            Err(TranspileError::NoRule { gate: GateName::Cz })
        ));
    }

    #[test]
    fn conditions_are_copied() {
        let mut c = Circuit::new(1, 1);
        c.push(Instruction::new(GateKind::H, [0]).with_condition(0, true));
        let t = translate_basis(&c, &ibm()).unwrap();
        assert!(t.instructions().iter().all(|i| i.condition.is_some()));
    }
}
