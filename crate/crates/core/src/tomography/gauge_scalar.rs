//! The scalar `L` with `grad L = A1' - A1` for curl-free short-range differences.
use alloc::vec::Vec;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::{circulation, curl_at, numerical_gradient, Envelope, ScalarField, ShortRangeField, VectorField};
use crate::geom::{dot, norm, orthogonal_unit, scale, Dim, Vec3};
use crate::quad::{integrate, integrate_ray};
use crate::sampling::shell_points;
use crate::tolerances::Tolerances;

const CURL_PROBES: usize = 64;
const PATH_PROBES: usize = 100;
const RAY_TOL: f64 = 1e-13;
const TAIL_TOL: f64 = 1e-12;

/// The region `inner <= |x| <= outer`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0) || !(outer > inner) {
            return Err(crate::error::invalid("annulus needs 0 < inner < outer"));
        }
        Ok(Annulus { inner, outer })
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        let r = norm(x);
        r >= self.inner && r <= self.outer
    }
}

/// `L(x) = -int_{|x|}^inf A(t x/|x|) . x/|x| dt`, evaluated on demand. It tends
/// to zero at infinity and its gradient is `A` wherever `A` is curl-free.
#[derive(Clone, Debug)]
pub struct GaugeScalar {
    field: VectorField,
    envelope: Option<Envelope>,
    dim: Dim,
    region: Annulus,
    path_defect: f64,
}

impl GaugeScalar {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn region(&self) -> Annulus {
        self.region
    }

    /// Largest disagreement between radial and arc paths seen during validation.
    pub fn path_defect(&self) -> f64 {
        self.path_defect
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero()
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        radial_potential(&self.field, self.envelope.as_ref(), x)
    }

    /// Gradient by central differences with step `h`.
    pub fn gradient(&self, x: &Vec3, h: f64) -> Vec3 {
        let mut g = numerical_gradient(&|y: &Vec3| self.eval(y), x, h);
        if self.dim == Dim::Two {
            g[2] = 0.0;
        }
        g
    }

    /// `|L| <= C' <x>^{-eps0}` outside the inner radius, from the envelope of
    /// `A`: `|L| <= C r^{-eps0} / eps0`.
    pub fn envelope(&self) -> Option<Envelope> {
        self.envelope.map(|e| {
            let r = self.region.inner;
            let ratio = (1.0 + r * r).sqrt() / r;
            Envelope::new(e.c / e.eps0 * ratio.powf(e.eps0), e.eps0)
        })
    }

    /// `L` as a field (evaluated lazily).
    pub fn to_scalar_field(&self) -> ScalarField {
        if self.is_zero() {
            return ScalarField::Zero;
        }
        let me = self.clone();
        ScalarField::custom(move |x| me.eval(x))
    }
}

fn radial_potential(field: &VectorField, envelope: Option<&Envelope>, x: &Vec3) -> f64 {
    if field.is_zero() {
        return 0.0;
    }
    let r = norm(x);
    let u = scale(1.0 / r, x);
    let end = envelope.map_or(1e6 * r, |e| {
        // tail of C t^{-1-eps0} beyond `end` is C end^{-eps0} / eps0
        (e.c / (e.eps0 * TAIL_TOL)).powf(1.0 / e.eps0).max(2.0 * r)
    });
    -integrate_ray(|t| dot(&field.eval(&scale(t, &u)), &u), r, end, RAY_TOL).value
}

/// Line integral of `field` along the great-circle arc of radius `|x|` from
/// `|x| a` to `x`.
fn arc_integral(field: &VectorField, a: &Vec3, x: &Vec3) -> f64 {
    let r = norm(x);
    let xh = scale(1.0 / r, x);
    let c = dot(&xh, a).clamp(-1.0, 1.0);
    let beta = c.acos();
    if beta == 0.0 {
        return 0.0;
    }
    let perp = crate::geom::axpy(&xh, -c, a);
    let v = if norm(&perp) > 1e-12 { scale(1.0 / norm(&perp), &perp) } else { orthogonal_unit(a) };
    integrate(
        |phi: f64| {
            let (s, co) = phi.sin_cos();
            let p = [r * (co * a[0] + s * v[0]), r * (co * a[1] + s * v[1]), r * (co * a[2] + s * v[2])];
            let t = [r * (-s * a[0] + co * v[0]), r * (-s * a[1] + co * v[1]), r * (-s * a[2] + co * v[2])];
            dot(&field.eval(&p), &t)
        },
        0.0,
        beta,
        1e-12,
        1e-12,
    )
    .value
}

/// Recovers `L` with `grad L = adiff` on `region`, normalized to vanish at
/// infinity.
///
/// Checks, in order: the curl of `adiff` at quasi-random probes (else
/// [`Error::NotCurlFree`]), in the plane the circulation around the inner
/// circle (else [`Error::ResidualFlux`]: the difference carries a winding),
/// the declared envelope (else [`Error::TailNotBounded`]), and agreement of
/// radial-from-infinity and radial-then-arc path integrals at 100 probes.
pub fn find_gauge_scalar(adiff: &ShortRangeField, dim: Dim, region: &Annulus, tol: &Tolerances) -> Result<GaugeScalar> {
    let field = adiff.field.clone();
    let zero = GaugeScalar { field: VectorField::Zero, envelope: None, dim, region: *region, path_defect: 0.0 };
    if field.is_zero() {
        return Ok(zero);
    }
    let probes = shell_points(dim, region.inner, region.outer, CURL_PROBES);
    let curl = probes.iter().map(|x| norm(&curl_at(&field, x, dim, 1e-3).0)).fold(0.0, f64::max);
    if curl > tol.curl {
        return Err(Error::NotCurlFree { defect: curl });
    }
    if dim == Dim::Two {
        let c = circulation(&field, region.inner);
        if c.abs() > tol.loop_integral {
            return Err(Error::ResidualFlux { circulation: c });
        }
    }
    let envelope = adiff.envelope.ok_or(Error::TailNotBounded)?;
    let mut out = GaugeScalar { field, envelope: Some(envelope), dim, region: *region, path_defect: 0.0 };
    let anchor = [1.0, 0.0, 0.0];
    let points: Vec<Vec3> = shell_points(dim, region.inner, region.outer, PATH_PROBES + 7).split_off(7);
    let mut defect: f64 = 0.0;
    let mut size: f64 = 0.0;
    for x in &points {
        let direct = out.eval(x);
        let via_anchor = out.eval(&scale(norm(x), &anchor)) + arc_integral(&out.field, &anchor, x);
        defect = defect.max((direct - via_anchor).abs());
        size = size.max(direct.abs());
    }
    if defect > tol.path * size.max(1.0) {
        return Err(Error::NotCurlFree { defect });
    }
    out.path_defect = defect;
    Ok(out)
}
