//! Flux, curl and the leading-order (|x|^-2) part of two-forms.
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::config::PotentialConfig;
use super::source::{partial, VectorSource};
use crate::angular::{Interpolation, SphereFunction, SphereGrid};
use crate::error::{Error, Result};
use crate::geom::{cross, dot, norm, scale, Dim, Vec3};
use crate::quad::neville;

/// Relative finite-difference step used for curls unless configured otherwise.
pub const DEFAULT_CURL_STEP: f64 = 1e-3;

/// `(1 / 2 pi) * circulation of A` around the circle `|x| = radius`, by the
/// periodic trapezoid rule refined until two successive estimates agree.
pub fn flux(config: &PotentialConfig, radius: f64) -> Result<f64> {
    if config.dim != Dim::Two {
        return Err(Error::DimensionMismatch { expected: 2, found: config.dim.n() });
    }
    if radius <= config.obstacle_radius {
        return Err(Error::CircleInsideObstacle { radius, obstacle: config.obstacle_radius });
    }
    Ok(circulation(config, radius) / TAU)
}

/// Circulation `oint A . dx` of a planar field around `|x| = radius`.
pub fn circulation<A: VectorSource>(a: &A, radius: f64) -> f64 {
    let trapezoid = |m: usize| -> f64 {
        let mut s = 0.0;
        for j in 0..m {
            let t = TAU * j as f64 / m as f64;
            let (c, sn) = (t.cos(), t.sin());
            let v = a.vector_at(&[radius * c, radius * sn, 0.0]);
            s += radius * (-v[0] * sn + v[1] * c);
        }
        s * TAU / m as f64
    };
    let mut m = 256;
    let mut prev = trapezoid(m);
    while m < 1 << 16 {
        m *= 2;
        let next = trapezoid(m);
        if (next - prev).abs() <= 1e-14 * next.abs().max(1.0) {
            return next;
        }
        prev = next;
    }
    prev
}

/// A two-form in three dimensions stored as its axial vector
/// `(B_23, B_31, B_12)`; in the plane only `B_12` is used.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TwoForm(pub Vec3);

impl TwoForm {
    /// `B_ij`, antisymmetric by construction.
    pub fn component(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let k = 3 - i - j;
        let sign = if (j + 3 - i) % 3 == 1 { 1.0 } else { -1.0 };
        sign * self.0[k]
    }

    /// `B(u, v)`.
    pub fn apply(&self, u: &Vec3, v: &Vec3) -> f64 {
        dot(&self.0, &cross(u, v))
    }

    /// The planar curl `B_12`.
    pub fn planar(&self) -> f64 {
        self.0[2]
    }
}

/// `dA` at `x` by fourth-order central differences with step `rel_step * |x|`.
pub fn curl_at<A: VectorSource>(a: &A, x: &Vec3, dim: Dim, rel_step: f64) -> TwoForm {
    let h = rel_step * norm(x).max(1e-3);
    let comp = |c: usize| move |y: &Vec3| a.vector_at(y)[c];
    let d = |c: usize, axis: usize| partial(&comp(c), x, axis, h);
    match dim {
        Dim::Two => TwoForm([0.0, 0.0, d(1, 0) - d(0, 1)]),
        Dim::Three => TwoForm([d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)]),
    }
}

/// `dA` at every point of a region that must stay outside the obstacle.
pub fn curl<A: VectorSource>(
    a: &A,
    dim: Dim,
    points: &[Vec3],
    obstacle_radius: f64,
    rel_step: f64,
) -> Result<Vec<TwoForm>> {
    if let Some(x) = points.iter().find(|x| norm(x) < obstacle_radius) {
        return Err(Error::RegionTouchesObstacle { radius: norm(x), obstacle: obstacle_radius });
    }
    Ok(points.iter().map(|x| curl_at(a, x, dim, rel_step)).collect())
}

/// `dA` of a configuration on a region, checked against the obstacle.
pub fn config_curl(config: &PotentialConfig, points: &[Vec3], rel_step: f64) -> Result<Vec<TwoForm>> {
    for x in points {
        config.check_outside(norm(x))?;
    }
    curl(config, config.dim, points, config.obstacle_radius, rel_step)
}

/// Values of a scalar quantity on concentric spheres `radius * grid`.
#[derive(Clone, Debug)]
pub struct RadialSamples {
    pub grid: Arc<SphereGrid>,
    pub radii: Vec<f64>,
    /// `values[r][node]`.
    pub values: Vec<Vec<f64>>,
}

impl RadialSamples {
    pub fn sample<F: FnMut(&Vec3) -> f64>(grid: Arc<SphereGrid>, radii: &[f64], mut f: F) -> Self {
        let values = radii.iter().map(|&r| grid.nodes().iter().map(|w| f(&scale(r, w))).collect()).collect();
        RadialSamples { grid, radii: radii.to_vec(), values }
    }

    /// The three axial components of a two-form sampled on the spheres.
    pub fn sample_two_form<A: VectorSource>(
        a: &A,
        grid: Arc<SphereGrid>,
        radii: &[f64],
        rel_step: f64,
    ) -> [RadialSamples; 3] {
        let forms: Vec<Vec<TwoForm>> = radii
            .iter()
            .map(|&r| grid.nodes().iter().map(|w| curl_at(a, &scale(r, w), Dim::Three, rel_step)).collect())
            .collect();
        core::array::from_fn(|c| RadialSamples {
            grid: grid.clone(),
            radii: radii.to_vec(),
            values: forms.iter().map(|row| row.iter().map(|b| b.0[c]).collect()).collect(),
        })
    }
}

/// Limit of `|x|^2 B(x)` along rays, by polynomial extrapolation in `1/|x|`.
///
/// The residual is the change of the extrapolated value when the innermost
/// radius is dropped; it must stay below `tol * max(1, |b|)` at every node.
pub fn extract_leading_order(samples: &RadialSamples, tol: f64) -> Result<SphereFunction> {
    let radii = &samples.radii;
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(crate::error::invalid("radii must be strictly increasing (at least two)"));
    }
    if samples.values.len() != radii.len() || samples.values.iter().any(|v| v.len() != samples.grid.len()) {
        return Err(Error::GridMismatch { reason: "radial samples do not match the grid".into() });
    }
    let xs: Vec<f64> = radii.iter().map(|r| 1.0 / r).collect();
    let mut out = Vec::with_capacity(samples.grid.len());
    let mut worst: f64 = 0.0;
    for node in 0..samples.grid.len() {
        let ys: Vec<f64> = radii.iter().zip(&samples.values).map(|(r, v)| r * r * v[node]).collect();
        let (b, _) = neville(&xs, &ys, 0.0);
        let (b_outer, _) = neville(&xs[1..], &ys[1..], 0.0);
        let residual = (b - b_outer).abs() / b.abs().max(1.0);
        worst = worst.max(residual);
        out.push(b);
    }
    if worst > tol {
        return Err(Error::NonConvergent { residual: worst });
    }
    SphereFunction::from_values(samples.grid.clone(), out, Interpolation::Cubic)
}
