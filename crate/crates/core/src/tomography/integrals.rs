//! Scalar and vector X-ray transforms along single lines.
use core::f64::consts::{FRAC_PI_2, PI};

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::line::Line;
use crate::fields::{Envelope, PotentialConfig, ScalarPotential, ScalarSource, TransversalField, VectorSource};
use crate::error::{Error, Result};
use crate::geom::{cross, dot};
use crate::quad::{integrate, integrate_symmetric_range};

/// `int_{-S}^{S} f(x0 + s omega) ds` for an integrand bounded by
/// `C <x>^{-1-eps0}`, with `S` chosen so that the neglected tails stay
/// below `tail_tol`.
pub fn truncated_line_integral<F: FnMut(f64) -> f64>(f: F, line: &Line, envelope: &Envelope, tail_tol: f64) -> f64 {
    let span = envelope.truncation(tail_tol);
    let scale = (0.5 * line.distance_to_origin()).max(0.25);
    integrate_symmetric_range(f, span, scale, 0.1 * tail_tol).value
}

/// X-ray transform of a short-range scalar potential along a line avoiding
/// the obstacle of radius `obstacle_radius`.
pub fn line_integral_scalar(v: &ScalarPotential, line: &Line, obstacle_radius: f64, tail_tol: f64) -> Result<f64> {
    line.check_outside(obstacle_radius)?;
    if v.field.is_zero() {
        return Ok(0.0);
    }
    let env = v.envelope.as_ref().ok_or(Error::TailNotBounded)?;
    Ok(truncated_line_integral(|s| v.value_at(&line.point(s)), line, env, tail_tol))
}

/// `int A1 . omega ds` for the short-range part alone.
pub fn line_integral_short_range(config: &PotentialConfig, line: &Line, tail_tol: f64) -> Result<f64> {
    let a1 = &config.short_range;
    if a1.field.is_zero() {
        return Ok(0.0);
    }
    let env = a1.envelope.as_ref().ok_or(Error::TailNotBounded)?;
    let w = line.omega();
    Ok(truncated_line_integral(|s| dot(&a1.vector_at(&line.point(s)), &w), line, env, tail_tol))
}

/// Line integral of the long-range part from its closed form: the flux part
/// contributes `+-alpha pi` (sign = side of the origin) and the gradient part
/// `a0(omega) - a0(-omega)`.
pub fn line_integral_long_range(a0: &TransversalField, line: &Line) -> f64 {
    let w = line.omega();
    match a0 {
        TransversalField::Planar { profile } => {
            // a_hat = alpha + a0'; the mean is the flux, the rest integrates to the
            // antipodal difference of the zero-mean antiderivative
            let alpha = profile.mean();
            let gradient = profile
                .shifted_by(-alpha)
                .zero_mean_antiderivative(f64::INFINITY)
                .map(|a| a.antipodal_difference(&w))
                .unwrap_or(0.0);
            line.orientation() * alpha * PI + gradient
        }
        TransversalField::Spatial { swirl, gradient } => {
            let x0 = line.x0();
            let d = line.distance_to_origin();
            let flux = dot(swirl, &cross(&x0, &w)) * PI / d;
            flux + gradient.as_ref().map_or(0.0, |psi| psi.antipodal_difference(&w))
        }
    }
}

/// `int A . omega ds` with the long-range part in closed form and the
/// short-range part by adaptive quadrature.
pub fn line_integral_vector(config: &PotentialConfig, line: &Line, tail_tol: f64) -> Result<f64> {
    line.check_outside(config.obstacle_radius)?;
    line.dim().expect(config.dim)?;
    Ok(line_integral_long_range(&config.transversal, line) + line_integral_short_range(config, line, tail_tol)?)
}

/// `int A . omega ds` by quadrature of the full field: the long-range part in
/// the variable `s = d tan u` (which makes its integrand bounded), the
/// short-range part directly. Used as an independent check of
/// [`line_integral_vector`].
pub fn line_integral_vector_quadrature(config: &PotentialConfig, line: &Line, tail_tol: f64) -> Result<f64> {
    line.check_outside(config.obstacle_radius)?;
    let d = line.distance_to_origin();
    let w = line.omega();
    let long = integrate(
        |u: f64| {
            let c = u.cos();
            let s = d * u.tan();
            dot(&config.long_range(&line.point(s)), &w) * d / (c * c)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        1e-13,
        1e-13,
    );
    Ok(long.value + line_integral_short_range(config, line, tail_tol)?)
}
