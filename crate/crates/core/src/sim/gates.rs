// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::circuit::GateKind;
use crate::scalar::Scalar;

pub type Mat2<T> = [[Complex<T>; 2]; 2];

fn re<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn im<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(T::zero(), x)
}

/// 2×2 matrix of a single-qubit gate, `None` for multi-qubit or non-unitary
/// kinds and for angles the scalar cannot represent.
pub fn single_qubit_matrix<T: Scalar>(kind: &GateKind) -> Option<Mat2<T>> {
    let zero = || Complex::<T>::zero();
    let one = || Complex::<T>::one();
    let s = T::frac_1_sqrt_2;
    let half = || T::one() / (T::one() + T::one());
    let m = match *kind {
        GateKind::H => [[re(s()), re(s())], [re(s()), re(-s())]],
        GateKind::X => [[zero(), one()], [one(), zero()]],
        GateKind::Y => [[zero(), im(-T::one())], [im(T::one()), zero()]],
        GateKind::Z => [[one(), zero()], [zero(), re(-T::one())]],
        GateKind::S => [[one(), zero()], [zero(), im(T::one())]],
        GateKind::Sdg => [[one(), zero()], [zero(), im(-T::one())]],
        GateKind::T => [[one(), zero()], [zero(), Complex::new(s(), s())]],
        GateKind::Tdg => [[one(), zero()], [zero(), Complex::new(s(), -s())]],
        GateKind::Sx => {
            let p = Complex::new(half(), half());
            let q = Complex::new(half(), -half());
            [[p.clone(), q.clone()], [q, p]]
        }
        GateKind::Rx(theta) => {
            let (c, sn) = T::half_angle(theta)?;
            [[re(c.clone()), im(-sn.clone())], [im(-sn), re(c)]]
        }
        GateKind::Ry(theta) => {
            let (c, sn) = T::half_angle(theta)?;
            [[re(c.clone()), re(-sn.clone())], [re(sn), re(c)]]
        }
        GateKind::Rz(theta) => {
            let (c, sn) = T::half_angle(theta)?;
            [
                [Complex::new(c.clone(), -sn.clone()), zero()],
                [zero(), Complex::new(c, sn)],
            ]
        }
        _ => return None,
    };
    Some(m)
}

/// Whether every unitary in `kinds` has an exact matrix over `T`.
pub fn representable<'a, T: Scalar>(kinds: impl IntoIterator<Item = &'a GateKind>) -> bool {
    kinds.into_iter().all(|k| match k {
        GateKind::Rx(_) | GateKind::Ry(_) | GateKind::Rz(_) => single_qubit_matrix::<T>(k).is_some(),
        _ => true,
    })
}
