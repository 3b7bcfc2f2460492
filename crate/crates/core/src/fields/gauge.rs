//! The gauge group `g = e^{i(m theta + phi + L)}` and its action on potentials.
// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::config::{verify, PotentialConfig, ShortRangeField};
use super::source::{Envelope, ScalarField, VectorField};
use super::transversal::TransversalField;
use crate::angular::{AngularFunction, SphereFunction, DEFAULT_ORDER};
use crate::error::{Error, Result};
use crate::geom::{normalize, polar_angle, Dim, Vec3};

/// Homogeneous degree-0 phase of a gauge element.
#[derive(Clone, Debug, PartialEq)]
pub enum Phase {
    Circle(AngularFunction),
    Sphere(SphereFunction),
}

impl Phase {
    pub fn dim(&self) -> Dim {
        match self {
            Phase::Circle(_) => Dim::Two,
            Phase::Sphere(_) => Dim::Three,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Phase::Circle(f) => f.is_zero(),
            Phase::Sphere(f) => f.is_zero(),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Phase::Circle(f) => f.mean(),
            Phase::Sphere(f) => f.mean(),
        }
    }

    /// Value at the direction of `x`.
    pub fn eval(&self, x: &Vec3) -> f64 {
        match self {
            Phase::Circle(f) => f.eval(polar_angle(x)),
            Phase::Sphere(f) => f.eval(&normalize(x)),
        }
    }

    fn combine(&self, other: &Phase, s: f64) -> Result<Phase> {
        match (self, other) {
            (Phase::Circle(a), Phase::Circle(b)) => Ok(Phase::Circle(a.add(&b.scaled(s)))),
            (Phase::Sphere(a), Phase::Sphere(b)) => Ok(Phase::Sphere(a.add(&b.scaled(s))?)),
            _ => Err(Error::DimensionMismatch { expected: self.dim().n(), found: other.dim().n() }),
        }
    }

    fn negated(&self) -> Phase {
        match self {
            Phase::Circle(f) => Phase::Circle(f.scaled(-1.0)),
            Phase::Sphere(f) => Phase::Sphere(f.scaled(-1.0)),
        }
    }
}

/// Gauge element `(m, phi, L)`; `m = 0` in three dimensions.
#[derive(Clone, Debug)]
pub struct GaugeElement {
    pub m: i64,
    pub phase: Phase,
    pub l: ScalarField,
    /// `|L| <= C <x>^{-eps0}`, `|grad L| <= C <x>^{-1-eps0}`.
    pub l_envelope: Option<Envelope>,
}

impl GaugeElement {
    /// Planar element `e^{i(m theta + phi(theta) + L)}`; `phi` must have zero mean.
    pub fn planar(m: i64, phi: AngularFunction, tol_mean: f64) -> Result<Self> {
        let g = GaugeElement { m, phase: Phase::Circle(phi), l: ScalarField::Zero, l_envelope: None };
        g.validate(tol_mean)?;
        Ok(g)
    }

    /// Spatial element `e^{i(psi(x/|x|) + L)}`; `psi` must have zero mean.
    pub fn spatial(psi: SphereFunction, tol_mean: f64) -> Result<Self> {
        let g = GaugeElement { m: 0, phase: Phase::Sphere(psi), l: ScalarField::Zero, l_envelope: None };
        g.validate(tol_mean)?;
        Ok(g)
    }

    pub fn identity(dim: Dim) -> Self {
        let phase = match dim {
            Dim::Two => Phase::Circle(AngularFunction::zero(DEFAULT_ORDER)),
            Dim::Three => {
                let grid = alloc::sync::Arc::new(crate::angular::SphereGrid::icosahedral(3));
                Phase::Sphere(SphereFunction::zero(grid))
            }
        };
        GaugeElement { m: 0, phase, l: ScalarField::Zero, l_envelope: None }
    }

    /// Adds a short-range scalar `L` with its envelope.
    pub fn with_short_range(mut self, l: ScalarField, envelope: Envelope) -> Self {
        self.l = l;
        self.l_envelope = Some(envelope);
        self
    }

    pub fn dim(&self) -> Dim {
        self.phase.dim()
    }

    pub fn validate(&self, tol_mean: f64) -> Result<()> {
        let mean = self.phase.mean();
        let scale = match &self.phase {
            Phase::Circle(f) => f.max_coefficient().max(1.0),
            Phase::Sphere(f) => f.max_abs().max(1.0),
        };
        if mean.abs() >= tol_mean * scale {
            return Err(Error::NonzeroMean { mean });
        }
        if self.dim() == Dim::Three && self.m != 0 {
            return Err(crate::error::invalid("winding number must vanish in three dimensions"));
        }
        Ok(())
    }

    /// Checks the declared envelope of `L` at the given points.
    pub fn verify_envelope(&self, points: &[Vec3]) -> Result<()> {
        verify(points, self.l_envelope.as_ref(), 0.0, |x| self.l.eval(x).abs(), self.l.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.m == 0 && self.phase.is_zero() && self.l.is_zero()
    }

    /// `g^{-1}`.
    pub fn inverse(&self) -> Self {
        GaugeElement { m: -self.m, phase: self.phase.negated(), l: self.l.clone().scaled(-1.0), l_envelope: self.l_envelope }
    }

    /// `self * other` (phases add).
    pub fn compose(&self, other: &GaugeElement) -> Result<Self> {
        let l_envelope = match (self.l_envelope, other.l_envelope) {
            (Some(a), Some(b)) => Some(a.combine(&b)),
            (a, b) => a.or(b),
        };
        Ok(GaugeElement {
            m: self.m + other.m,
            phase: self.phase.combine(&other.phase, 1.0)?,
            l: self.l.clone().sum(other.l.clone()),
            l_envelope,
        })
    }

    /// The real exponent `m theta + phi + L` at `x`, with `theta` in `(-pi, pi]`.
    pub fn exponent(&self, x: &Vec3) -> f64 {
        let winding = if self.m != 0 { self.m as f64 * polar_angle(x) } else { 0.0 };
        winding + self.phase.eval(x) + self.l.eval(x)
    }
}

/// `A' = A - i g^{-1} grad g = A + grad(m theta + phi + L)`; `V` is unchanged.
///
/// The long-range part changes exactly (`a_hat -> a_hat + m + phi'` in the
/// plane, `psi -> psi + phase` in space); the short-range part gains `grad L`.
pub fn apply_gauge_to_potential(config: &PotentialConfig, g: &GaugeElement) -> Result<PotentialConfig> {
    if g.dim() != config.dim {
        return Err(Error::DimensionMismatch { expected: config.dim.n(), found: g.dim().n() });
    }
    if g.is_identity() {
        return Ok(config.clone());
    }
    let transversal = match (&config.transversal, &g.phase) {
        (TransversalField::Planar { profile }, Phase::Circle(phi)) => {
            TransversalField::Planar { profile: profile.add(&phi.derivative()).shifted_by(g.m as f64) }
        }
        (TransversalField::Spatial { swirl, gradient }, Phase::Sphere(psi)) => {
            if g.m != 0 {
                return Err(crate::error::invalid("winding number must vanish in three dimensions"));
            }
            let gradient = match gradient {
                Some(old) => Some(old.add(psi)?),
                None => Some(psi.clone()),
            };
            TransversalField::Spatial { swirl: *swirl, gradient }
        }
        _ => return Err(Error::DimensionMismatch { expected: config.dim.n(), found: g.dim().n() }),
    };
    let short_range = if g.l.is_zero() {
        config.short_range.clone()
    } else {
        let envelope = match (config.short_range.envelope, g.l_envelope) {
            (Some(a), Some(b)) => Some(a.combine(&b)),
            (None, b) if config.short_range.field.is_zero() => b,
            _ => None,
        };
        ShortRangeField { field: config.short_range.field.clone().sum(VectorField::Gradient(g.l.clone())), envelope }
    };
    Ok(PotentialConfig { transversal, short_range, ..config.clone() })
}
