//! Full potential configurations `(R, A0, A1, V)` on an exterior domain.
use alloc::vec::Vec;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::source::{Envelope, ScalarField, ScalarSource, VectorField, VectorSource};
use super::transversal::TransversalField;
use crate::error::{Error, Result};
use crate::geom::{add, norm, Dim, Vec3};

/// Short-range magnetic part `A1` with its declared envelope.
#[derive(Clone, Debug, Default)]
pub struct ShortRangeField {
    pub field: VectorField,
    pub envelope: Option<Envelope>,
}

impl ShortRangeField {
    pub fn new(field: VectorField, envelope: Envelope) -> Self {
        ShortRangeField { field, envelope: Some(envelope) }
    }

    pub fn zero() -> Self {
        ShortRangeField::default()
    }

    /// Checks `|A1(x)| <= C <x>^{-1-eps0}` at the given points.
    pub fn verify_envelope(&self, points: &[Vec3]) -> Result<()> {
        verify(points, self.envelope.as_ref(), 1.0, |x| norm(&self.field.eval(x)), self.field.is_zero())
    }
}

impl VectorSource for ShortRangeField {
    fn vector_at(&self, x: &Vec3) -> Vec3 {
        self.field.eval(x)
    }
}

/// Short-range electric potential `V` with its declared envelope.
#[derive(Clone, Debug, Default)]
pub struct ScalarPotential {
    pub field: ScalarField,
    pub envelope: Option<Envelope>,
}

impl ScalarPotential {
    pub fn new(field: ScalarField, envelope: Envelope) -> Self {
        ScalarPotential { field, envelope: Some(envelope) }
    }

    pub fn zero() -> Self {
        ScalarPotential::default()
    }

    /// Checks `|V(x)| <= C <x>^{-1-eps0}` at the given points.
    pub fn verify_envelope(&self, points: &[Vec3]) -> Result<()> {
        verify(points, self.envelope.as_ref(), 1.0, |x| self.field.eval(x).abs(), self.field.is_zero())
    }
}

impl ScalarSource for ScalarPotential {
    fn value_at(&self, x: &Vec3) -> f64 {
        self.field.eval(x)
    }
}

pub(crate) fn verify<F: Fn(&Vec3) -> f64>(
    points: &[Vec3],
    envelope: Option<&Envelope>,
    extra: f64,
    magnitude: F,
    zero: bool,
) -> Result<()> {
    if zero {
        return Ok(());
    }
    let env = envelope.ok_or(Error::TailNotBounded)?;
    for x in points {
        let r = norm(x);
        let value = magnitude(x);
        let bound = env.bound(r, extra);
        if !(value <= bound * (1.0 + 1e-12)) {
            return Err(Error::EnvelopeViolated { radius: r, value, bound });
        }
    }
    Ok(())
}

/// A configuration `A = A0 + A1`, `V` outside an obstacle of circumscribed radius `R`.
#[derive(Clone, Debug)]
pub struct PotentialConfig {
    pub dim: Dim,
    pub obstacle_radius: f64,
    /// Whether the obstacle is declared convex (the regime covered by the
    /// uniqueness theory); non-convex configurations are processed the same way.
    pub convex: bool,
    pub transversal: TransversalField,
    pub short_range: ShortRangeField,
    pub scalar: ScalarPotential,
}

impl PotentialConfig {
    pub fn new(
        obstacle_radius: f64,
        transversal: TransversalField,
        short_range: ShortRangeField,
        scalar: ScalarPotential,
    ) -> Result<Self> {
        let config = PotentialConfig {
            dim: transversal.dim(),
            obstacle_radius,
            convex: true,
            transversal,
            short_range,
            scalar,
        };
        config.validate()?;
        Ok(config)
    }

    /// Pure Aharonov–Bohm configuration in the plane.
    pub fn aharonov_bohm(obstacle_radius: f64, alpha: f64) -> Self {
        PotentialConfig {
            dim: Dim::Two,
            obstacle_radius,
            convex: true,
            transversal: TransversalField::aharonov_bohm(alpha),
            short_range: ShortRangeField::zero(),
            scalar: ScalarPotential::zero(),
        }
    }

    /// Checks the radius, finiteness on the obstacle boundary and the declared
    /// envelopes on quasi-random points of `R <= |x| <= 100 R`.
    pub fn validate(&self) -> Result<()> {
        if !(self.obstacle_radius > 0.0) {
            return Err(crate::error::invalid("obstacle radius must be positive"));
        }
        if self.transversal.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim.n(), found: self.transversal.dim().n() });
        }
        let boundary = self.obstacle_radius * (1.0 - 1e-9);
        for x in self.sample_points(boundary, boundary, 64) {
            let a = self.vector_potential(&x);
            if !(a.iter().all(|v| v.is_finite()) && self.scalar_potential(&x).is_finite()) {
                return Err(crate::error::invalid("fields are not finite on the obstacle boundary"));
            }
        }
        let pts = self.sample_points(self.obstacle_radius, 100.0 * self.obstacle_radius, 400);
        self.short_range.verify_envelope(&pts)?;
        self.scalar.verify_envelope(&pts)
    }

    /// Quasi-random points with `r_min <= |x| <= r_max` (log-uniform in radius).
    pub fn sample_points(&self, r_min: f64, r_max: f64, count: usize) -> Vec<Vec3> {
        crate::sampling::shell_points(self.dim, r_min, r_max, count)
    }

    pub fn long_range(&self, x: &Vec3) -> Vec3 {
        self.transversal.eval(x)
    }

    pub fn vector_potential(&self, x: &Vec3) -> Vec3 {
        add(&self.transversal.eval(x), &self.short_range.field.eval(x))
    }

    pub fn scalar_potential(&self, x: &Vec3) -> f64 {
        self.scalar.field.eval(x)
    }

    pub(crate) fn check_outside(&self, r: f64) -> Result<()> {
        if r < self.obstacle_radius {
            Err(Error::RegionTouchesObstacle { radius: r, obstacle: self.obstacle_radius })
        } else {
            Ok(())
        }
    }

    /// Same configuration with `V` replaced.
    pub fn with_scalar(&self, scalar: ScalarPotential) -> Self {
        PotentialConfig { scalar, ..self.clone() }
    }

    /// Same configuration with the scalar potential scaled by `s` (for perturbation sweeps).
    pub fn scaled_scalar(&self, s: f64) -> Self {
        let field = self.scalar.field.clone().scaled(s);
        let envelope = self.scalar.envelope.map(|e| Envelope { c: e.c * s.abs(), ..e });
        self.with_scalar(ScalarPotential { field, envelope })
    }
}

impl VectorSource for PotentialConfig {
    fn vector_at(&self, x: &Vec3) -> Vec3 {
        self.vector_potential(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::source::{ScalarKind, VectorKind};

    #[test]
    fn envelope_violations_are_reported() {
        let v = ScalarPotential::new(ScalarField::Analytic(ScalarKind::Bracket { amp: 1.0, power: 3.0 }), Envelope::new(0.5, 2.0));
        let cfg = PotentialConfig::new(1.0, TransversalField::aharonov_bohm(0.5), ShortRangeField::zero(), v);
        assert!(matches!(cfg, Err(Error::EnvelopeViolated { .. })));
    }

    #[test]
    fn missing_envelope_is_reported() {
        let a1 = ShortRangeField { field: VectorField::Analytic(VectorKind::Swirl { axis: [0.0, 0.0, 1.0] }), envelope: None };
        let cfg = PotentialConfig::new(1.0, TransversalField::aharonov_bohm(0.5), a1, ScalarPotential::zero());
        assert!(matches!(cfg, Err(Error::TailNotBounded)));
    }

    #[test]
    fn valid_configuration_passes() {
        let a1 = ShortRangeField::new(VectorField::Analytic(VectorKind::Swirl { axis: [0.0, 0.0, 0.3] }), Envelope::new(0.3, 1.0));
        let v = ScalarPotential::new(ScalarField::Analytic(ScalarKind::Bracket { amp: 1.0, power: 3.0 }), Envelope::new(1.0, 2.0));
        assert!(PotentialConfig::new(1.0, TransversalField::aharonov_bohm(0.5), a1, v).is_ok());
    }
}
