//! Lines, planes and X-ray data records.
use alloc::vec::Vec;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{axpy, cross, dot, norm, scale, sub, Dim, Vec3};
use num_complex::Complex64;

/// Oriented line `x0 + s omega` with `x0 . omega = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    x0: Vec3,
    omega: Vec3,
    dim: Dim,
}

impl Line {
    /// Validates `|omega| = 1` (to 1e-12, then renormalized) and `x0 . omega = 0`.
    pub fn new(x0: Vec3, omega: Vec3, dim: Dim) -> Result<Self> {
        let len = norm(&omega);
        if (len - 1.0).abs() > 1e-12 {
            return Err(crate::error::invalid("line direction must be a unit vector"));
        }
        if dim == Dim::Two && (x0[2] != 0.0 || omega[2] != 0.0) {
            return Err(crate::error::invalid("planar line with a nonzero third component"));
        }
        let omega = scale(1.0 / len, &omega);
        if dot(&x0, &omega).abs() > 1e-12 * norm(&x0).max(1.0) {
            return Err(crate::error::invalid("impact vector must be orthogonal to the direction"));
        }
        Ok(Line { x0, omega, dim })
    }

    /// Line through any point `p` with direction `omega` (impact vector
    /// obtained by projection).
    pub fn through(p: Vec3, omega: Vec3, dim: Dim) -> Result<Self> {
        let w = scale(1.0 / norm(&omega), &omega);
        let x0 = axpy(&p, -dot(&p, &w), &w);
        Line::new(x0, w, dim)
    }

    /// Planar line with direction `(cos phi, sin phi)` and impact vector
    /// `p (sin phi, -cos phi)`: for `p > 0` the origin lies to the left.
    pub fn planar(phi: f64, p: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Line { x0: [p * s, -p * c, 0.0], omega: [c, s, 0.0], dim: Dim::Two }
    }

    /// Sinogram line `{x : x . (cos theta, sin theta) = p}` traversed in the
    /// direction `(-sin theta, cos theta)`.
    pub fn from_sinogram(theta: f64, p: f64) -> Self {
        Line::planar(theta + core::f64::consts::FRAC_PI_2, p)
    }

    pub fn x0(&self) -> Vec3 {
        self.x0
    }

    pub fn omega(&self) -> Vec3 {
        self.omega
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn distance_to_origin(&self) -> f64 {
        norm(&self.x0)
    }

    pub fn point(&self, s: f64) -> Vec3 {
        axpy(&self.x0, s, &self.omega)
    }

    /// `+1` when the origin lies to the left of a planar line, `-1` otherwise.
    pub fn orientation(&self) -> f64 {
        let z = self.x0[0] * self.omega[1] - self.x0[1] * self.omega[0];
        if z >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    pub(crate) fn check_outside(&self, obstacle_radius: f64) -> Result<()> {
        let d = self.distance_to_origin();
        if d <= obstacle_radius {
            Err(Error::LineHitsObstacle { distance: d, obstacle: obstacle_radius })
        } else {
            Ok(())
        }
    }
}

/// A two-dimensional affine plane `p + u e1 + v e2` in space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    p: Vec3,
    e1: Vec3,
    e2: Vec3,
}

impl Plane {
    pub fn new(p: Vec3, e1: Vec3, e2: Vec3) -> Result<Self> {
        if (norm(&e1) - 1.0).abs() > 1e-12 || (norm(&e2) - 1.0).abs() > 1e-12 || dot(&e1, &e2).abs() > 1e-12 {
            return Err(crate::error::invalid("plane tangents must be orthonormal"));
        }
        Ok(Plane { p, e1, e2 })
    }

    /// The plane `{x : x . normal = offset}` with some orthonormal tangent pair.
    pub fn with_normal(normal: Vec3, offset: f64) -> Result<Self> {
        let n = scale(1.0 / norm(&normal), &normal);
        let e1 = crate::geom::orthogonal_unit(&n);
        let e2 = cross(&n, &e1);
        Plane::new(scale(offset, &n), e1, e2)
    }

    pub fn base(&self) -> Vec3 {
        self.p
    }

    pub fn e1(&self) -> Vec3 {
        self.e1
    }

    pub fn e2(&self) -> Vec3 {
        self.e2
    }

    pub fn normal(&self) -> Vec3 {
        cross(&self.e1, &self.e2)
    }

    pub fn distance_to_origin(&self) -> f64 {
        dot(&self.p, &self.normal()).abs()
    }

    /// Point of the plane closest to the origin.
    pub fn foot(&self) -> Vec3 {
        let n = self.normal();
        scale(dot(&self.p, &n), &n)
    }

    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        axpy(&axpy(&self.p, u, &self.e1), v, &self.e2)
    }

    /// In-plane coordinates of a point of the plane.
    pub fn coordinates(&self, x: &Vec3) -> (f64, f64) {
        let d = sub(x, &self.p);
        (dot(&d, &self.e1), dot(&d, &self.e2))
    }
}

/// Which potential component an X-ray record refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XRayComponent {
    Scalar,
    Vector,
}

/// Values of an X-ray record: raw integrals or exponentiated vector integrals.
#[derive(Clone, Debug, PartialEq)]
pub enum XRayValues {
    Real(Vec<f64>),
    Unimodular(Vec<Complex64>),
}

impl XRayValues {
    pub fn len(&self) -> usize {
        match self {
            XRayValues::Real(v) => v.len(),
            XRayValues::Unimodular(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Line integrals of one potential component over a set of lines.
#[derive(Clone, Debug, PartialEq)]
pub struct XRayData {
    pub lines: Vec<Line>,
    pub values: XRayValues,
    pub component: XRayComponent,
}

impl XRayData {
    pub fn new(lines: Vec<Line>, values: XRayValues, component: XRayComponent) -> Result<Self> {
        if lines.len() != values.len() {
            return Err(Error::GridMismatch {
                reason: alloc::format!("{} lines but {} values", lines.len(), values.len()),
            });
        }
        if let XRayValues::Unimodular(v) = &values {
            if let Some((k, z)) = v.iter().enumerate().find(|(_, z)| (z.norm() - 1.0).abs() > 1e-10) {
                return Err(Error::NotUnitary { k: k as i64, modulus: z.norm() });
            }
        }
        Ok(XRayData { lines, values, component })
    }

    /// Exponentiated vector data `exp(i * integral)`.
    pub fn exponentiated(lines: Vec<Line>, integrals: &[f64]) -> Result<Self> {
        let values = integrals.iter().map(|&t| Complex64::new(t.cos(), t.sin())).collect();
        XRayData::new(lines, XRayValues::Unimodular(values), XRayComponent::Vector)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_invariants() {
        let l = Line::planar(0.7, 2.0);
        assert!((norm(&l.omega()) - 1.0).abs() < 1e-15);
        assert!(dot(&l.x0(), &l.omega()).abs() < 1e-15);
        assert!((l.distance_to_origin() - 2.0).abs() < 1e-15);
        assert_eq!(l.orientation(), 1.0);
        assert_eq!(Line::planar(0.7, -2.0).orientation(), -1.0);
        assert!(Line::new([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], Dim::Two).is_err());
        let t = Line::through([3.0, 1.0, 2.0], [0.0, 2.0, 0.0], Dim::Three).unwrap();
        assert_eq!(t.x0(), [3.0, 0.0, 2.0]);
    }

    #[test]
    fn sinogram_line_normal() {
        let th = 0.4;
        let l = Line::from_sinogram(th, 1.5);
        let n = [th.cos(), th.sin(), 0.0];
        assert!((dot(&l.x0(), &n) - 1.5).abs() < 1e-15);
        assert!(dot(&l.omega(), &n).abs() < 1e-15);
    }

    #[test]
    fn plane_frame() {
        let p = Plane::with_normal([0.0, 0.0, 2.0], 1.5).unwrap();
        assert!((p.distance_to_origin() - 1.5).abs() < 1e-15);
        let x = p.point(0.3, -0.2);
        let (u, v) = p.coordinates(&x);
        assert!((u - 0.3).abs() < 1e-15 && (v + 0.2).abs() < 1e-15);
    }

    #[test]
    fn unimodular_check() {
        let l = alloc::vec![Line::planar(0.0, 2.0)];
        let bad = XRayValues::Unimodular(alloc::vec![Complex64::new(1.1, 0.0)]);
        assert!(matches!(XRayData::new(l, bad, XRayComponent::Vector), Err(Error::NotUnitary { .. })));
    }
}
