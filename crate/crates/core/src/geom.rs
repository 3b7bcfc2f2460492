//! Points and vectors. Two-dimensional data lives in the first two slots of a
//! [`Vec3`] with the third slot zero.
// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Spatial dimension n of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn n(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_n(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::DimensionMismatch { expected: 2, found: n }),
        }
    }

    pub(crate) fn expect(self, expected: Dim) -> Result<()> {
        if self == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: expected.n(), found: self.n() })
        }
    }
}

#[inline]
pub fn point2(x: f64, y: f64) -> Vec3 {
    [x, y, 0.0]
}

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(s: f64, a: &Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

/// `a + s * b`
#[inline]
pub fn axpy(a: &Vec3, s: f64, b: &Vec3) -> Vec3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

#[inline]
pub fn neg(a: &Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn normalize(a: &Vec3) -> Vec3 {
    let r = norm(a);
    scale(1.0 / r, a)
}

/// Polar angle of the planar part of `x`, in (-pi, pi].
#[inline]
pub fn polar_angle(x: &Vec3) -> f64 {
    x[1].atan2(x[0])
}

/// The planar rotation generator `(-x2, x1)`.
#[inline]
pub fn rot90(x: &Vec3) -> Vec3 {
    [-x[1], x[0], 0.0]
}

/// Some unit vector orthogonal to the unit vector `u`.
pub fn orthogonal_unit(u: &Vec3) -> Vec3 {
    let pick = if u[0].abs() < 0.6 {
        [1.0, 0.0, 0.0]
    } else if u[1].abs() < 0.6 {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    normalize(&cross(u, &pick))
}
