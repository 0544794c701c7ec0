//! Symmetric second-order tensors stored as six independent components.
//!
//! Off-diagonal components are stored once; the full 3×3 contraction counts
//! them twice. No Voigt or Mandel factors are carried by the storage.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Absolute floor used by tolerance checks that are relative to a tensor's
/// component magnitude.
pub const ABS_FLOOR: f64 = 1e-14;

/// Symmetric 3×3 tensor with components `[11, 22, 33, 12, 13, 23]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymTensor(pub [f64; 6]);

impl SymTensor {
    pub const ZERO: SymTensor = SymTensor([0.0; 6]);
    pub const IDENTITY: SymTensor = SymTensor([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);

    pub fn new(c11: f64, c22: f64, c33: f64, c12: f64, c13: f64, c23: f64) -> Self {
        SymTensor([c11, c22, c33, c12, c13, c23])
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        SymTensor([a, b, c, 0.0, 0.0, 0.0])
    }

    /// Uniaxial tensor `diag(value, 0, 0)`.
    pub fn uniaxial(value: f64) -> Self {
        SymTensor::diag(value, 0.0, 0.0)
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn deviator(&self) -> SymTensor {
        deviator(self)
    }

    pub fn norm(&self) -> f64 {
        frobenius_norm(self)
    }

    pub fn dot(&self, other: &SymTensor) -> f64 {
        double_contract(self, other)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Component `(i, j)` with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 0) => self.0[0],
            (1, 1) => self.0[1],
            (2, 2) => self.0[2],
            (0, 1) => self.0[3],
            (0, 2) => self.0[4],
            (1, 2) => self.0[5],
            _ => panic!("index ({i}, {j}) out of range for a 3x3 tensor"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

/// `A^D = A − (1/3) tr(A) 1`.
pub fn deviator(a: &SymTensor) -> SymTensor {
    let mean = a.trace() / 3.0;
    let c = a.0;
    SymTensor([c[0] - mean, c[1] - mean, c[2] - mean, c[3], c[4], c[5]])
}

/// Full 3×3 contraction `a : b`; off-diagonal products enter twice.
pub fn double_contract(a: &SymTensor, b: &SymTensor) -> f64 {
    let (x, y) = (a.0, b.0);
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + 2.0 * (x[3] * y[3] + x[4] * y[4] + x[5] * y[5])
}

pub fn frobenius_norm(a: &SymTensor) -> f64 {
    double_contract(a, a).sqrt()
}

impl Add for SymTensor {
    type Output = SymTensor;
    fn add(self, rhs: SymTensor) -> SymTensor {
        let mut out = self;
        out += rhs;
        out
    }
}

impl AddAssign for SymTensor {
    fn add_assign(&mut self, rhs: SymTensor) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for SymTensor {
    type Output = SymTensor;
    fn sub(self, rhs: SymTensor) -> SymTensor {
        let mut out = self;
        out -= rhs;
        out
    }
}

impl SubAssign for SymTensor {
    fn sub_assign(&mut self, rhs: SymTensor) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl Mul<SymTensor> for f64 {
    type Output = SymTensor;
    fn mul(self, rhs: SymTensor) -> SymTensor {
        SymTensor(rhs.0.map(|c| self * c))
    }
}

impl Mul<f64> for SymTensor {
    type Output = SymTensor;
    fn mul(self, rhs: f64) -> SymTensor {
        rhs * self
    }
}

impl Neg for SymTensor {
    type Output = SymTensor;
    fn neg(self) -> SymTensor {
        -1.0 * self
    }
}

impl std::iter::Sum for SymTensor {
    fn sum<I: Iterator<Item = SymTensor>>(iter: I) -> SymTensor {
        iter.fold(SymTensor::ZERO, |acc, t| acc + t)
    }
}
