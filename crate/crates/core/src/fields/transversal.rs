//! Homogeneous transversal potentials and their flux-plus-gradient split.
use alloc::vec::Vec;
use core::f64::consts::TAU;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::source::VectorSource;
use crate::angular::{AngularFunction, SphereFunction};
use crate::error::{Error, Result};
use crate::geom::{add, cross, dot, norm, polar_angle, rot90, scale, Dim, Vec3};

/// The Aharonov–Bohm potential `alpha (-x2, x1) / |x|^2`.
pub fn eval_ab_potential(alpha: f64, x: &Vec3) -> Result<Vec3> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2.sqrt() < 1e-12 {
        return Err(Error::OriginSingularity);
    }
    Ok(scale(alpha / r2, &rot90(x)))
}

/// Long-range part `A0`: homogeneous of degree -1 with `x . A0(x) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum TransversalField {
    /// `A0(x) = (-x2, x1)/|x|^2 a_hat(theta)` in the plane.
    Planar { profile: AngularFunction },
    /// `A0(x) = swirl x x / |x|^2 + grad psi(x/|x|)` in space.
    Spatial { swirl: Vec3, gradient: Option<SphereFunction> },
}

impl TransversalField {
    pub fn planar(profile: AngularFunction) -> Self {
        TransversalField::Planar { profile }
    }

    /// Pure Aharonov–Bohm field of flux `alpha`.
    pub fn aharonov_bohm(alpha: f64) -> Self {
        TransversalField::Planar { profile: AngularFunction::constant(crate::angular::DEFAULT_ORDER, alpha) }
    }

    pub fn zero(dim: Dim) -> Self {
        match dim {
            Dim::Two => TransversalField::aharonov_bohm(0.0),
            Dim::Three => TransversalField::Spatial { swirl: [0.0; 3], gradient: None },
        }
    }

    /// Reads the profile off a planar vector field: `a_hat(theta) = A(e_theta) . (-sin, cos)`.
    ///
    /// The field is sampled at `2 order + 1` directions on the unit circle and
    /// at radii 0.5, 2 and 7 to check transversality and homogeneity.
    pub fn from_planar_field<A: VectorSource>(a: &A, order: usize, tol: f64) -> Result<Self> {
        let m = 2 * order + 1;
        let mut samples = Vec::with_capacity(m);
        let mut radial: f64 = 0.0;
        let mut homogeneous: f64 = 0.0;
        for j in 0..m {
            let t = TAU * j as f64 / m as f64;
            let e = [t.cos(), t.sin(), 0.0];
            let v = a.vector_at(&e);
            let a_hat = dot(&v, &rot90(&e));
            samples.push(a_hat);
            radial = radial.max(dot(&v, &e).abs());
            for r in [0.5, 2.0, 7.0] {
                let w = a.vector_at(&scale(r, &e));
                radial = radial.max((r * dot(&w, &e)).abs());
                homogeneous = homogeneous.max((r * dot(&w, &rot90(&e)) - a_hat).abs());
            }
        }
        let scale_ref = samples.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        if radial > tol * scale_ref {
            return Err(Error::NotTransversal { residual: radial });
        }
        if homogeneous > tol * scale_ref {
            return Err(Error::NotHomogeneous { residual: homogeneous });
        }
        Ok(TransversalField::Planar { profile: AngularFunction::from_samples(&samples)? })
    }

    pub fn dim(&self) -> Dim {
        match self {
            TransversalField::Planar { .. } => Dim::Two,
            TransversalField::Spatial { .. } => Dim::Three,
        }
    }

    pub fn eval(&self, x: &Vec3) -> Vec3 {
        match self {
            TransversalField::Planar { profile } => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                scale(profile.eval(polar_angle(x)) / r2, &rot90(x))
            }
            TransversalField::Spatial { swirl, gradient } => {
                let r = norm(x);
                let mut v = scale(1.0 / (r * r), &cross(swirl, x));
                if let Some(psi) = gradient {
                    v = add(&v, &scale(1.0 / r, &psi.tangential_gradient(x)));
                }
                v
            }
        }
    }

    /// Largest `|x . A0(x)| |x|` over the given points.
    pub fn transversality_defect(&self, points: &[Vec3]) -> f64 {
        points.iter().map(|x| (dot(x, &self.eval(x)) * norm(x)).abs()).fold(0.0, f64::max)
    }
}

impl VectorSource for TransversalField {
    fn vector_at(&self, x: &Vec3) -> Vec3 {
        self.eval(x)
    }
}

/// `A0 = alpha (-x2, x1)/|x|^2 + grad a0(theta)` with `a0` of zero mean.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub alpha: f64,
    pub a0: AngularFunction,
}

impl Decomposition {
    /// Reassembled `A0(x) = (-x2, x1)/|x|^2 (alpha + a0'(theta))`.
    pub fn reassemble(&self, x: &Vec3) -> Vec3 {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let gradient = self.a0.derivative().eval(polar_angle(x));
        scale((self.alpha + gradient) / r2, &rot90(x))
    }

    pub fn profile(&self) -> AngularFunction {
        self.a0.derivative().shifted_by(self.alpha)
    }
}

/// Splits a planar transversal field into its flux `alpha` (the mean of the
/// profile) and the zero-mean angular potential `a0` with `a0' = a_hat - alpha`.
pub fn decompose_transversal(a0: &TransversalField, tol_mean: f64) -> Result<Decomposition> {
    let profile = match a0 {
        TransversalField::Planar { profile } => profile,
        TransversalField::Spatial { .. } => return Err(Error::DimensionMismatch { expected: 2, found: 3 }),
    };
    let alpha = profile.mean();
    let a0 = profile.shifted_by(-alpha).zero_mean_antiderivative(tol_mean)?;
    Ok(Decomposition { alpha, a0 })
}
