//! Scalar and vector fields: closed-form profiles, grid samples and callables.
use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::grid::GridField;
use crate::geom::{add, cross, dot, norm, scale, sub, Vec3};

/// Anything that can be evaluated as a scalar field.
pub trait ScalarSource {
    fn value_at(&self, x: &Vec3) -> f64;
}

/// Anything that can be evaluated as a vector field.
pub trait VectorSource {
    fn vector_at(&self, x: &Vec3) -> Vec3;
}

impl<F: Fn(&Vec3) -> f64> ScalarSource for F {
    fn value_at(&self, x: &Vec3) -> f64 {
        self(x)
    }
}

impl<F: Fn(&Vec3) -> Vec3> VectorSource for F {
    fn vector_at(&self, x: &Vec3) -> Vec3 {
        self(x)
    }
}

/// Declared decay envelope `(C, eps0)`.
///
/// A short-range vector or scalar potential obeys `|f(x)| <= C <x>^{-1-eps0}`;
/// a gauge scalar `L` obeys `|L(x)| <= C <x>^{-eps0}` and `|grad L| <= C <x>^{-1-eps0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub c: f64,
    pub eps0: f64,
}

impl Envelope {
    pub fn new(c: f64, eps0: f64) -> Self {
        Envelope { c, eps0 }
    }

    /// `C <x>^{-extra - eps0}` at radius `r`.
    pub fn bound(&self, r: f64, extra: f64) -> f64 {
        self.c * (1.0 + r * r).powf(-0.5 * (extra + self.eps0))
    }

    /// Envelope of a sum of two fields.
    pub fn combine(&self, other: &Envelope) -> Envelope {
        Envelope { c: self.c + other.c, eps0: self.eps0.min(other.eps0) }
    }

    /// Half-length `S` beyond which the two tails of an integrand bounded by
    /// `C |s|^{-1-eps0}` contribute less than `tol`.
    pub fn truncation(&self, tol: f64) -> f64 {
        (2.0 * self.c / (self.eps0 * tol)).powf(1.0 / self.eps0)
    }
}

/// Closed-form scalar profiles.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarKind {
    /// `amp <x>^{-power}`.
    Bracket { amp: f64, power: f64 },
    /// `amp exp(-(|x| - radius)^2 / (2 width^2))`.
    GaussianRing { amp: f64, radius: f64, width: f64 },
    /// `amp exp(-|x - center|^2 / (2 width^2))`.
    GaussianBump { amp: f64, center: Vec3, width: f64 },
    /// Smooth compactly supported bump of height `amp` and support radius `radius`.
    CompactBump { amp: f64, center: Vec3, radius: f64 },
}

impl ScalarKind {
    pub fn value(&self, x: &Vec3) -> f64 {
        match *self {
            ScalarKind::Bracket { amp, power } => amp * (1.0 + dot(x, x)).powf(-0.5 * power),
            ScalarKind::GaussianRing { amp, radius, width } => {
                let d = norm(x) - radius;
                amp * (-d * d / (2.0 * width * width)).exp()
            }
            ScalarKind::GaussianBump { amp, center, width } => {
                let d = sub(x, &center);
                amp * (-dot(&d, &d) / (2.0 * width * width)).exp()
            }
            ScalarKind::CompactBump { amp, center, radius } => {
                let d = sub(x, &center);
                let q = dot(&d, &d) / (radius * radius);
                if q < 1.0 {
                    amp * (1.0 - 1.0 / (1.0 - q)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    pub fn gradient(&self, x: &Vec3) -> Vec3 {
        match *self {
            ScalarKind::Bracket { amp, power } => {
                let b = 1.0 + dot(x, x);
                scale(-amp * power * b.powf(-0.5 * power - 1.0), x)
            }
            ScalarKind::GaussianRing { radius, width, .. } => {
                let r = norm(x);
                if r == 0.0 {
                    return [0.0; 3];
                }
                let f = self.value(x);
                scale(-f * (r - radius) / (width * width * r), x)
            }
            ScalarKind::GaussianBump { center, width, .. } => {
                let d = sub(x, &center);
                scale(-self.value(x) / (width * width), &d)
            }
            ScalarKind::CompactBump { center, radius, .. } => {
                let d = sub(x, &center);
                let q = dot(&d, &d) / (radius * radius);
                if q >= 1.0 {
                    return [0.0; 3];
                }
                let f = self.value(x);
                scale(-f * 2.0 / ((1.0 - q) * (1.0 - q) * radius * radius), &d)
            }
        }
    }
}

/// Closed-form vector profiles.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorKind {
    /// `axis x x / <x>^3`; in the plane use `axis = (0, 0, s)` for `s (-x2, x1) / <x>^3`.
    Swirl { axis: Vec3 },
    /// Planar vortex `(-x2, x1)/r^2 (G(r) - G(inf))` with `G' = r B` for the
    /// Gaussian ring `B = amp exp(-(r - radius)^2 / (2 width^2))`. Its curl is
    /// `B` away from the origin and the field decays like the ring.
    RingVortex { amp: f64, radius: f64, width: f64 },
}

impl VectorKind {
    pub fn value(&self, x: &Vec3) -> Vec3 {
        match *self {
            VectorKind::Swirl { axis } => {
                let b = 1.0 + dot(x, x);
                scale(b.powf(-1.5), &cross(&axis, x))
            }
            VectorKind::RingVortex { amp, radius, width } => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                if r2 == 0.0 {
                    return [0.0; 3];
                }
                let r = r2.sqrt();
                let s = core::f64::consts::SQRT_2 * width;
                let d = r - radius;
                let tail = width * width * (-d * d / (s * s)).exp()
                    + radius * width * (core::f64::consts::PI / 2.0).sqrt() * libm::erfc(d / s);
                let g = -amp * tail / r2;
                [-x[1] * g, x[0] * g, 0.0]
            }
        }
    }
}

/// A scalar field on the exterior domain.
#[derive(Clone, Default)]
pub enum ScalarField {
    #[default]
    Zero,
    Analytic(ScalarKind),
    Sampled(Arc<GridField>),
    Custom(Arc<dyn Fn(&Vec3) -> f64 + Send + Sync>),
    Sum(Vec<ScalarField>),
    Scaled(f64, Box<ScalarField>),
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Zero => f.write_str("Zero"),
            ScalarField::Analytic(k) => f.debug_tuple("Analytic").field(k).finish(),
            ScalarField::Sampled(g) => f.debug_tuple("Sampled").field(&g.shape()).finish(),
            ScalarField::Custom(_) => f.write_str("Custom(..)"),
            ScalarField::Sum(parts) => f.debug_tuple("Sum").field(parts).finish(),
            ScalarField::Scaled(s, inner) => f.debug_tuple("Scaled").field(s).field(inner).finish(),
        }
    }
}

impl ScalarField {
    pub fn custom<F: Fn(&Vec3) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        ScalarField::Custom(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ScalarField::Zero => true,
            ScalarField::Sum(parts) => parts.iter().all(ScalarField::is_zero),
            ScalarField::Scaled(s, inner) => *s == 0.0 || inner.is_zero(),
            _ => false,
        }
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        match self {
            ScalarField::Zero => 0.0,
            ScalarField::Analytic(k) => k.value(x),
            ScalarField::Sampled(g) => g.eval(x)[0],
            ScalarField::Custom(f) => f(x),
            ScalarField::Sum(parts) => parts.iter().map(|p| p.eval(x)).sum(),
            ScalarField::Scaled(s, inner) => s * inner.eval(x),
        }
    }

    /// Gradient: exact for closed forms, fourth-order central differences
    /// with step `1e-3 max(|x|, 1)` otherwise.
    pub fn gradient(&self, x: &Vec3) -> Vec3 {
        match self {
            ScalarField::Zero => [0.0; 3],
            ScalarField::Analytic(k) => k.gradient(x),
            ScalarField::Sum(parts) => parts.iter().fold([0.0; 3], |acc, p| add(&acc, &p.gradient(x))),
            ScalarField::Scaled(s, inner) => scale(*s, &inner.gradient(x)),
            _ => numerical_gradient(&|y: &Vec3| self.eval(y), x, 1e-3 * norm(x).max(1.0)),
        }
    }

    pub fn sum(self, other: ScalarField) -> ScalarField {
        match (self.is_zero(), other.is_zero()) {
            (true, _) => other,
            (_, true) => self,
            _ => ScalarField::Sum(alloc::vec![self, other]),
        }
    }

    pub fn scaled(self, s: f64) -> ScalarField {
        if self.is_zero() {
            self
        } else {
            ScalarField::Scaled(s, Box::new(self))
        }
    }
}

impl ScalarSource for ScalarField {
    fn value_at(&self, x: &Vec3) -> f64 {
        self.eval(x)
    }
}

/// A vector field on the exterior domain.
#[derive(Clone, Default)]
pub enum VectorField {
    #[default]
    Zero,
    Analytic(VectorKind),
    /// Gradient of a scalar field (curl-free by construction).
    Gradient(ScalarField),
    Sampled(Arc<GridField>),
    Custom(Arc<dyn Fn(&Vec3) -> Vec3 + Send + Sync>),
    Sum(Vec<VectorField>),
    Scaled(f64, Box<VectorField>),
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorField::Zero => f.write_str("Zero"),
            VectorField::Analytic(k) => f.debug_tuple("Analytic").field(k).finish(),
            VectorField::Gradient(s) => f.debug_tuple("Gradient").field(s).finish(),
            VectorField::Sampled(g) => f.debug_tuple("Sampled").field(&g.shape()).finish(),
            VectorField::Custom(_) => f.write_str("Custom(..)"),
            VectorField::Sum(parts) => f.debug_tuple("Sum").field(parts).finish(),
            VectorField::Scaled(s, inner) => f.debug_tuple("Scaled").field(s).field(inner).finish(),
        }
    }
}

impl VectorField {
    pub fn custom<F: Fn(&Vec3) -> Vec3 + Send + Sync + 'static>(f: F) -> Self {
        VectorField::Custom(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            VectorField::Zero => true,
            VectorField::Gradient(s) => s.is_zero(),
            VectorField::Sum(parts) => parts.iter().all(VectorField::is_zero),
            VectorField::Scaled(s, inner) => *s == 0.0 || inner.is_zero(),
            _ => false,
        }
    }

    pub fn eval(&self, x: &Vec3) -> Vec3 {
        match self {
            VectorField::Zero => [0.0; 3],
            VectorField::Analytic(k) => k.value(x),
            VectorField::Gradient(s) => s.gradient(x),
            VectorField::Sampled(g) => {
                let v = g.eval(x);
                [v[0], v.get(1).copied().unwrap_or(0.0), v.get(2).copied().unwrap_or(0.0)]
            }
            VectorField::Custom(f) => f(x),
            VectorField::Sum(parts) => parts.iter().fold([0.0; 3], |acc, p| add(&acc, &p.eval(x))),
            VectorField::Scaled(s, inner) => scale(*s, &inner.eval(x)),
        }
    }

    pub fn sum(self, other: VectorField) -> VectorField {
        match (self.is_zero(), other.is_zero()) {
            (true, _) => other,
            (_, true) => self,
            _ => VectorField::Sum(alloc::vec![self, other]),
        }
    }

    pub fn scaled(self, s: f64) -> VectorField {
        if self.is_zero() {
            self
        } else {
            VectorField::Scaled(s, Box::new(self))
        }
    }
}

impl VectorSource for VectorField {
    fn vector_at(&self, x: &Vec3) -> Vec3 {
        self.eval(x)
    }
}

/// Fourth-order central difference `d/dx_axis` of a scalar function.
pub(crate) fn partial<F: Fn(&Vec3) -> f64>(f: &F, x: &Vec3, axis: usize, h: f64) -> f64 {
    let at = |t: f64| {
        let mut y = *x;
        y[axis] += t;
        f(&y)
    };
    (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h)
}

/// Fourth-order central-difference gradient in all three coordinates.
pub fn numerical_gradient<F: Fn(&Vec3) -> f64>(f: &F, x: &Vec3, h: f64) -> Vec3 {
    [partial(f, x, 0, h), partial(f, x, 1, h), partial(f, x, 2, h)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_gradients_match_differences() {
        let kinds = [
            ScalarKind::Bracket { amp: 1.3, power: 1.0 },
            ScalarKind::GaussianRing { amp: 0.7, radius: 1.5, width: 0.3 },
            ScalarKind::GaussianBump { amp: -0.4, center: [1.0, 2.0, 0.5], width: 0.8 },
            ScalarKind::CompactBump { amp: 2.0, center: [2.0, 0.0, 0.0], radius: 1.5 },
        ];
        let x = [1.7, 0.9, 0.4];
        for k in &kinds {
            let g = k.gradient(&x);
            let fd = numerical_gradient(&|y: &Vec3| k.value(y), &x, 1e-3);
            assert!(norm(&sub(&g, &fd)) < 1e-9, "{k:?}");
        }
    }

    #[test]
    fn ring_vortex_curl_is_the_gaussian_ring() {
        let v = VectorKind::RingVortex { amp: 1.0, radius: 1.5, width: 0.2 };
        for x in [[1.2, 0.3, 0.0], [0.2, -1.6, 0.0], [-2.0, 1.0, 0.0]] {
            let h = 1e-4;
            let b = partial(&|y: &Vec3| v.value(y)[1], &x, 0, h) - partial(&|y: &Vec3| v.value(y)[0], &x, 1, h);
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            let exact = (-(r - 1.5) * (r - 1.5) / (2.0 * 0.04)).exp();
            assert!((b - exact).abs() < 1e-8, "{b} {exact}");
        }
        // decays with the ring
        assert!(norm(&v.value(&[6.0, 0.0, 0.0])) < 1e-30);
    }

    #[test]
    fn envelope_truncation_bounds_the_tail() {
        let e = Envelope::new(2.0, 0.5);
        let s = e.truncation(1e-9);
        // two tails of C s^{-1-eps} beyond s
        let tail = 2.0 * e.c * s.powf(-e.eps0) / e.eps0;
        assert!(tail <= 1e-9 * (1.0 + 1e-12));
    }
}
