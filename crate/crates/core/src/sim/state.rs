// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense state vector with lazy qubit activation.
//!
//! Qubits that are in a known computational basis state are kept outside
//! the dense vector as classical bits. A qubit joins the vector the first
//! time a gate could entangle it and leaves again after it is measured or
//! reset. Layouts with many short-lived communication qubits therefore
//! never hold more than a handful of them in the vector at once.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::gates::Mat2;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct StateVector<T: Scalar> {
    num_qubits: usize,
    /// Qubit held at each bit position of `amps` indices.
    active: Vec<usize>,
    /// Bit position of each qubit, if active.
    position: Vec<Option<usize>>,
    /// Basis value of each inactive qubit.
    known: Vec<bool>,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            active: Vec::new(),
            position: vec![None; num_qubits],
            known: vec![false; num_qubits],
            amps: vec![Complex::one()],
        }
    }

    /// Computational basis state with qubit `q` set to bit `q` of `index`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut s = Self::new(num_qubits);
        for q in 0..num_qubits {
            s.known[q] = (index >> q) & 1 == 1;
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of qubits currently held in the dense vector.
    pub fn num_active(&self) -> usize {
        self.active.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Rescales to unit norm when the scalar supports square roots.
    pub fn normalize(&mut self) {
        let n = self.norm_sqr();
        if n.is_zero() {
            return;
        }
        if let Some(r) = n.try_sqrt() {
            let inv = Complex::new(T::one() / r, T::zero());
            for a in &mut self.amps {
                *a = a.clone() * inv.clone();
            }
        }
    }

    fn activate(&mut self, q: usize) -> usize {
        if let Some(p) = self.position[q] {
            return p;
        }
        let p = self.active.len();
        let old = std::mem::take(&mut self.amps);
        let mut amps = vec![Complex::zero(); old.len() * 2];
        let offset = if self.known[q] { 1usize << p } else { 0 };
        for (i, a) in old.into_iter().enumerate() {
            amps[i | offset] = a;
        }
        self.amps = amps;
        self.active.push(q);
        self.position[q] = Some(p);
        p
    }

    /// Removes `q` from the dense vector, keeping only the `value` half.
    /// Callers must have projected `q` onto `value` first.
    fn deactivate(&mut self, q: usize, value: bool) {
        let Some(p) = self.position[q] else {
            self.known[q] = value;
            return;
        };
        let low_mask = (1usize << p) - 1;
        let half = self.amps.len() / 2;
        let old = std::mem::take(&mut self.amps);
        let mut amps = Vec::with_capacity(half);
        let bit = usize::from(value) << p;
        for j in 0..half {
            let i = (j & low_mask) | ((j & !low_mask) << 1) | bit;
            amps.push(old[i].clone());
        }
        self.amps = amps;
        self.active.remove(p);
        self.position[q] = None;
        for (k, &other) in self.active.iter().enumerate().skip(p) {
            self.position[other] = Some(k);
        }
        self.known[q] = value;
    }

    pub fn apply_single(&mut self, q: usize, m: &Mat2<T>) {
        let p = self.activate(q);
        let bit = 1usize << p;
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                continue;
            }
            let a0 = self.amps[i].clone();
            let a1 = self.amps[i | bit].clone();
            self.amps[i] = &m[0][0] * &a0 + &m[0][1] * &a1;
            self.amps[i | bit] = &m[1][0] * &a0 + &m[1][1] * &a1;
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        match self.position[q] {
            None => self.known[q] = !self.known[q],
            Some(p) => {
                let bit = 1usize << p;
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        self.amps.swap(i, i | bit);
                    }
                }
            }
        }
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        if self.position[control].is_none() {
            if self.known[control] {
                self.apply_x(target);
            }
            return;
        }
        let c = 1usize << self.position[control].unwrap_or_default();
        let t = 1usize << self.activate(target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        if (self.position[a].is_none() && !self.known[a])
            || (self.position[b].is_none() && !self.known[b])
        {
            return;
        }
        let pa = 1usize << self.activate(a);
        let pb = 1usize << self.activate(b);
        for i in 0..self.amps.len() {
            if i & pa != 0 && i & pb != 0 {
                self.amps[i] = -self.amps[i].clone();
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        if self.position[a].is_none() && self.position[b].is_none() {
            self.known.swap(a, b);
            return;
        }
        let pa = 1usize << self.activate(a);
        let pb = 1usize << self.activate(b);
        for i in 0..self.amps.len() {
            if i & pa != 0 && i & pb == 0 {
                self.amps.swap(i, (i & !pa) | pb);
            }
        }
    }

    pub fn apply_ccx(&mut self, a: usize, b: usize, target: usize) {
        for q in [a, b] {
            if self.position[q].is_none() && !self.known[q] {
                return;
            }
        }
        let pa = 1usize << self.activate(a);
        let pb = 1usize << self.activate(b);
        let pt = 1usize << self.activate(target);
        for i in 0..self.amps.len() {
            if i & pa != 0 && i & pb != 0 && i & pt == 0 {
                self.amps.swap(i, i | pt);
            }
        }
    }

    /// `‖P₁ψ‖²`, the unnormalized weight of outcome 1 on `q`.
    pub fn weight_one(&self, q: usize) -> T {
        match self.position[q] {
            None => {
                if self.known[q] {
                    self.norm_sqr()
                } else {
                    T::zero()
                }
            }
            Some(p) => {
                let bit = 1usize << p;
                self.amps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i & bit != 0)
                    .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
            }
        }
    }

    /// Probability of outcome 1 on `q` relative to the current norm.
    pub fn probability_one(&self, q: usize) -> T {
        let total = self.norm_sqr();
        if total.is_zero() {
            return T::zero();
        }
        self.weight_one(q) / total
    }

    /// Projects `q` onto `outcome` without renormalizing. The qubit leaves
    /// the dense vector.
    pub fn project(&mut self, q: usize, outcome: bool) {
        if let Some(p) = self.position[q] {
            let bit = 1usize << p;
            for (i, a) in self.amps.iter_mut().enumerate() {
                if (i & bit != 0) != outcome {
                    *a = Complex::zero();
                }
            }
        } else if self.known[q] != outcome {
            for a in &mut self.amps {
                *a = Complex::zero();
            }
        }
        self.deactivate(q, outcome);
    }

    /// Replaces the state by a basis state with `q` set to `outcome` and
    /// every other qubit at zero. Used for unreachable forced branches.
    pub fn replace_with_basis(&mut self, q: usize, outcome: bool) {
        *self = Self::new(self.num_qubits);
        self.known[q] = outcome;
    }

    /// Sets an inactive (already collapsed) qubit to `|0⟩`.
    pub fn clear_known(&mut self, q: usize) {
        debug_assert!(self.position[q].is_none());
        self.known[q] = false;
    }

    /// Unnormalized weight of each joint outcome of `qubits`; the outcome
    /// key has bit `k` equal to the value of `qubits[k]`.
    pub fn joint_weights(&self, qubits: &[usize]) -> Vec<(u64, T)> {
        let mut base = 0u64;
        let mut active_bits: Vec<(usize, usize)> = Vec::new();
        for (k, &q) in qubits.iter().enumerate() {
            match self.position[q] {
                Some(p) => active_bits.push((p, k)),
                None if self.known[q] => base |= 1 << k,
                None => {}
            }
        }
        let mut acc: std::collections::BTreeMap<u64, T> = std::collections::BTreeMap::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut key = base;
            for &(p, k) in &active_bits {
                if i >> p & 1 == 1 {
                    key |= 1 << k;
                }
            }
            let w = a.norm_sqr();
            let slot = acc.entry(key).or_insert_with(T::zero);
            *slot = slot.clone() + w;
        }
        acc.into_iter().collect()
    }

    /// Dense amplitudes over all qubits, qubit `q` at bit `q`.
    pub fn to_dense(&self) -> Vec<Complex<T>> {
        let order: Vec<usize> = (0..self.num_qubits).collect();
        self.amplitudes_over(&order)
            .unwrap_or_else(|| unreachable!("every qubit is in the order"))
    }

    /// Dense amplitudes over `order` (qubit `order[k]` at bit `k`). Returns
    /// `None` if a qubit outside `order` is still active; inactive qubits
    /// outside `order` are in a basis state and factor out.
    pub fn amplitudes_over(&self, order: &[usize]) -> Option<Vec<Complex<T>>> {
        let mut bit_of = vec![None; self.num_qubits];
        for (k, &q) in order.iter().enumerate() {
            bit_of[q] = Some(k);
        }
        if self.active.iter().any(|&q| bit_of[q].is_none()) {
            return None;
        }
        let mut base = 0usize;
        for (k, &q) in order.iter().enumerate() {
            if self.position[q].is_none() && self.known[q] {
                base |= 1 << k;
            }
        }
        let mut out = vec![Complex::zero(); 1usize << order.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut idx = base;
            for (p, &q) in self.active.iter().enumerate() {
                if i >> p & 1 == 1 {
                    idx |= 1 << bit_of[q].unwrap_or_default();
                }
            }
            out[idx] = a.clone();
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::sim::gates::single_qubit_matrix;

    fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::<f64>::new(1);
        s.apply_single(0, &single_qubit_matrix(&GateKind::H).unwrap());
        let d = s.to_dense();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(d[0], Complex::new(h, 0.0)));
        assert!(close(d[1], Complex::new(h, 0.0)));
    }

    #[test]
    fn bell_preparation() {
        let mut s = StateVector::<f64>::new(2);
        s.apply_single(0, &single_qubit_matrix(&GateKind::H).unwrap());
        s.apply_cx(0, 1);
        let d = s.to_dense();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(d[0], Complex::new(h, 0.0)));
        assert!(close(d[3], Complex::new(h, 0.0)));
        assert!(close(d[1], Complex::zero()) && close(d[2], Complex::zero()));
    }

    #[test]
    fn projection_deactivates_and_keeps_norm_after_normalize() {
        let mut s = StateVector::<f64>::new(3);
        s.apply_single(1, &single_qubit_matrix(&GateKind::H).unwrap());
        s.apply_cx(1, 2);
        assert_eq!(s.num_active(), 2);
        assert!((s.probability_one(2) - 0.5).abs() < 1e-12);
        s.project(2, true);
        s.normalize();
        assert_eq!(s.num_active(), 1);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let d = s.to_dense();
        // qubits 1 and 2 both set
        assert!(close(d[0b110], Complex::one()));
    }

    #[test]
    fn classical_shortcuts_match_dense_action() {
        let mut s = StateVector::<f64>::new(3);
        s.apply_x(0);
        s.apply_cx(0, 2);
        s.apply_swap(0, 1);
        assert_eq!(s.num_active(), 0);
        assert!(close(s.to_dense()[0b110], Complex::one()));
    }

    #[test]
    fn amplitudes_over_rejects_live_outsiders() {
        let mut s = StateVector::<f64>::new(2);
        s.apply_single(1, &single_qubit_matrix(&GateKind::H).unwrap());
        assert!(s.amplitudes_over(&[0]).is_none());
        assert!(s.amplitudes_over(&[1]).is_some());
    }
}
