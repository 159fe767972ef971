// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex;

use super::exec::Executor;
use super::state::StateVector;
use super::SimError;
use crate::circuit::{Circuit, GateKind};
use crate::scalar::Scalar;

/// Dense unitary of a measurement-free circuit, stored column by column.
/// Basis index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary<T: Scalar> {
    dim: usize,
    columns: Vec<Vec<Complex<T>>>,
}

impl<T: Scalar> Unitary<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Complex<T> {
        &self.columns[col][row]
    }

    pub fn column(&self, col: usize) -> &[Complex<T>] {
        &self.columns[col]
    }

    fn to_f64(&self) -> Vec<Vec<Complex<f64>>> {
        self.columns
            .iter()
            .map(|c| c.iter().map(|z| Complex::new(z.re.to_f64(), z.im.to_f64())).collect())
            .collect()
    }
}

/// Builds the unitary by running every basis state through the circuit.
/// Barriers are skipped; measurement, reset, placeholders and conditioned
/// gates are rejected.
pub fn circuit_unitary<T: Scalar>(c: &Circuit) -> Result<Unitary<T>, SimError> {
    for instr in c.instructions() {
        match instr.kind {
            GateKind::Measure | GateKind::Reset => {
                return Err(SimError::NonUnitary(instr.kind.name()))
            }
            GateKind::RemotePlaceholder(id) => return Err(SimError::Placeholder(id)),
            _ if instr.condition.is_some() => return Err(SimError::NonUnitary(instr.kind.name())),
            _ => {}
        }
    }
    let n = c.num_qubits();
    let dim = 1usize << n;
    let mut columns = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut ex = Executor::from_state(StateVector::<T>::basis(n, i), 0);
        for instr in c.instructions() {
            ex.apply_unitary(instr)?;
        }
        columns.push(ex.state().to_dense());
    }
    Ok(Unitary { dim, columns })
}

/// Whether `a = e^{iφ}·b` for some φ, entrywise within `tol`.
pub fn equal_up_to_global_phase<T: Scalar>(a: &Unitary<T>, b: &Unitary<T>, tol: f64) -> bool {
    if a.dim != b.dim {
        return false;
    }
    let (a, b) = (a.to_f64(), b.to_f64());
    let mut pivot = (0, 0, 0.0);
    for (j, col) in b.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            if z.norm() > pivot.2 {
                pivot = (i, j, z.norm());
            }
        }
    }
    if pivot.2 == 0.0 {
        return a.iter().flatten().all(|z| z.norm() <= tol);
    }
    let phase = a[pivot.1][pivot.0] / b[pivot.1][pivot.0];
    if (phase.norm() - 1.0).abs() > tol {
        return false;
    }
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| (x - phase * y).norm() <= tol)
}
