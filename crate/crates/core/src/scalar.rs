// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Scalar types for amplitudes.
//!
//! Amplitudes are `Complex<T>` for some `T: Scalar`. The floating-point
//! scalars (`f32`, `f64`) support every gate; [`QSqrt2`] is an exact field
//! `{a + b·√2 : a, b ∈ ℚ}` that represents every amplitude reachable by
//! Clifford+T circuits, so ideal probabilities such as `1/2` come out exact.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Real scalar usable as the component type of simulator amplitudes.
pub trait Scalar: Num + Clone + Debug + Neg<Output = Self> + Send + Sync + 'static {
    /// `1/√2`.
    fn frac_1_sqrt_2() -> Self;

    /// `(cos(θ/2), sin(θ/2))`, or `None` when the value is not representable.
    fn half_angle(theta: f64) -> Option<(Self, Self)>;

    /// Square root, or `None` for exact scalars where it would leave the field.
    fn try_sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Whether a probability this small should be treated as an impossible outcome.
    fn is_negligible(&self) -> bool;
}

macro_rules! impl_float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            #[inline]
            fn frac_1_sqrt_2() -> Self {
                std::f64::consts::FRAC_1_SQRT_2 as $t
            }

            #[inline]
            fn half_angle(theta: f64) -> Option<(Self, Self)> {
                let half = theta / 2.0;
                Some((half.cos() as $t, half.sin() as $t))
            }

            #[inline]
            fn try_sqrt(&self) -> Option<Self> {
                Some(self.sqrt())
            }

            #[inline]
            fn to_f64(&self) -> f64 {
                *self as f64
            }

            #[inline]
            fn is_negligible(&self) -> bool {
                self.abs() < $eps
            }
        }
    };
}

impl_float_scalar!(f64, 1e-14);
impl_float_scalar!(f32, 1e-6);

/// Exact element `rational + irrational·√2` of the field ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    rational: BigRational,
    irrational: BigRational,
}

/// Angles within this distance of a multiple of π/2 are treated as exact multiples.
const EXACT_ANGLE_TOL: f64 = 1e-12;

impl QSqrt2 {
    pub fn new(rational: BigRational, irrational: BigRational) -> Self {
        Self {
            rational,
            irrational,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `√2 / 2`
    pub fn half_sqrt2() -> Self {
        Self::new(
            BigRational::zero(),
            BigRational::new(BigInt::one(), BigInt::from(2)),
        )
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irrational
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero()
    }

    fn conjugate(&self) -> Self {
        Self::new(self.rational.clone(), -self.irrational.clone())
    }

    /// Field norm `a² − 2b²`, rational and zero only for zero.
    fn field_norm(&self) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        &self.rational * &self.rational - two * &self.irrational * &self.irrational
    }
}

impl Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irrational.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + {}√2", self.rational, self.irrational)
        }
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl Add for QSqrt2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.rational + rhs.rational, self.irrational + rhs.irrational)
    }
}

impl Sub for QSqrt2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.rational - rhs.rational, self.irrational - rhs.irrational)
    }
}

impl Mul for QSqrt2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let rational = &self.rational * &rhs.rational + two * &self.irrational * &rhs.irrational;
        let irrational = &self.rational * &rhs.irrational + &self.irrational * &rhs.rational;
        Self::new(rational, irrational)
    }
}

impl Div for QSqrt2 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let norm = rhs.field_norm();
        assert!(!norm.is_zero(), "division by zero in QSqrt2");
        let num = self * rhs.conjugate();
        Self::new(num.rational / norm.clone(), num.irrational / norm)
    }
}

// ℚ(√2) is a field, so every division is exact and the remainder vanishes.
impl Rem for QSqrt2 {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "remainder by zero in QSqrt2");
        Self::zero()
    }
}

impl Neg for QSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.rational, -self.irrational)
    }
}

impl Num for QSqrt2 {
    type FromStrRadixErr = num_rational::ParseRatioError;

    /// Parses the rational part only.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let r = BigRational::from_str_radix(s, radix)?;
        Ok(Self::new(r, BigRational::zero()))
    }
}

impl Scalar for QSqrt2 {
    fn frac_1_sqrt_2() -> Self {
        Self::half_sqrt2()
    }

    fn half_angle(theta: f64) -> Option<(Self, Self)> {
        if !theta.is_finite() {
            return None;
        }
        let quarter_turns = theta / std::f64::consts::FRAC_PI_2;
        let k = quarter_turns.round();
        if (theta - k * std::f64::consts::FRAC_PI_2).abs() > EXACT_ANGLE_TOL {
            return None;
        }
        // θ/2 = k·π/4
        let s = Self::half_sqrt2();
        let one = Self::one();
        let zero = Self::zero();
        let (c, sn) = match (k as i64).rem_euclid(8) {
            0 => (one, zero),
            1 => (s.clone(), s),
            2 => (zero, one),
            3 => (-s.clone(), s),
            4 => (-one, zero),
            5 => (-s.clone(), -s),
            6 => (zero, -one),
            _ => (s.clone(), -s),
        };
        Some((c, sn))
    }

    fn try_sqrt(&self) -> Option<Self> {
        None
    }

    fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.irrational.is_zero() {
            a
        } else {
            a + self.irrational.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
        }
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_sqrt2_squared_is_exactly_one_half() {
        let s = QSqrt2::frac_1_sqrt_2();
        let sq = s.clone() * s;
        assert!(sq.is_rational());
        assert_eq!(sq.to_f64(), 0.5);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = QSqrt2::new(
            BigRational::from_integer(3.into()),
            BigRational::from_integer((-2).into()),
        );
        let b = QSqrt2::new(
            BigRational::new(1.into(), 3.into()),
            BigRational::from_integer(5.into()),
        );
        let q = a.clone() * b.clone() / b;
        assert_eq!(q, a);
    }

    #[test]
    fn exact_half_angles_match_float() {
        for k in -9..=9 {
            let theta = k as f64 * std::f64::consts::FRAC_PI_2;
            let (c, s) = QSqrt2::half_angle(theta).unwrap();
            assert!((c.to_f64() - (theta / 2.0).cos()).abs() < 1e-12);
            assert!((s.to_f64() - (theta / 2.0).sin()).abs() < 1e-12);
        }
        assert!(QSqrt2::half_angle(0.3).is_none());
    }
}
