//! Parallel-beam sinograms outside an obstacle and their inversion.
//!
//! Lines meeting the obstacle `|x| <= R` carry no data. Filtered
//! backprojection needs every line through a point, so the shadow
//! `|p| <= R` is first completed: the angular harmonics of the field on the
//! annulus `R < r < P` are recovered from the exterior data alone (each
//! harmonic only sees lines with `p >= r`), then projected back onto the
//! shadow lines. The completed sinogram is filtered with a Hann-apodized ramp
//! cut off at the Nyquist frequency and backprojected.
//!
//! Recovering harmonic `l` from exterior lines amplifies data errors roughly
//! like `cosh(l acosh(P / R))`, so only low harmonics are completed. Fields
//! whose angular content on the annulus stays within that order are
//! reconstructed to the accuracy of the filter; sharply localized features
//! close to the obstacle come out with shadow artifacts.
use alloc::vec::Vec;
use core::f64::consts::PI;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use super::line::{Line, XRayData, XRayValues};
use crate::angular::wrap_phase;
use crate::error::{Error, Result};
use crate::fields::GridField;
use crate::geom::{norm, Vec3};
use crate::quad::gauss_legendre;

const MIN_ANGLES: usize = 16;
const MIN_OFFSETS: usize = 32;
const MIN_MEASURED_PER_SIDE: usize = 8;

/// Parallel-beam geometry: angles `theta_i = pi i / angles`, offsets at the
/// cell centres `p_j = -P + (j + 1/2) 2P / offsets`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinogramGeometry {
    pub angles: usize,
    pub offsets: usize,
    pub p_max: f64,
    pub obstacle_radius: f64,
}

impl SinogramGeometry {
    pub fn new(angles: usize, offsets: usize, p_max: f64, obstacle_radius: f64) -> Result<Self> {
        let g = SinogramGeometry { angles, offsets, p_max, obstacle_radius };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        let short = |reason: alloc::string::String| Err(Error::InsufficientCoverage { reason });
        if self.angles < MIN_ANGLES {
            return short(alloc::format!("{} angles (need {MIN_ANGLES})", self.angles));
        }
        if self.offsets < MIN_OFFSETS || !self.offsets.is_multiple_of(2) {
            return short(alloc::format!("{} offsets (need an even count >= {MIN_OFFSETS})", self.offsets));
        }
        if !(self.obstacle_radius >= 0.0) || !(self.p_max > self.obstacle_radius) {
            return short(alloc::format!("offset range {} does not exceed the obstacle {}", self.p_max, self.obstacle_radius));
        }
        let measured = (self.offsets / 2..self.offsets).filter(|&j| self.is_measured(j)).count();
        if measured < MIN_MEASURED_PER_SIDE {
            return short(alloc::format!("{measured} offsets per side outside the obstacle (need {MIN_MEASURED_PER_SIDE})"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.p_max / self.offsets as f64
    }

    pub fn theta(&self, i: usize) -> f64 {
        PI * i as f64 / self.angles as f64
    }

    pub fn offset(&self, j: usize) -> f64 {
        -self.p_max + (j as f64 + 0.5) * self.spacing()
    }

    /// Whether the line at offset index `j` avoids the obstacle.
    pub fn is_measured(&self, j: usize) -> bool {
        self.offset(j).abs() > self.obstacle_radius
    }

    pub fn line(&self, i: usize, j: usize) -> Line {
        Line::from_sinogram(self.theta(i), self.offset(j))
    }

    /// Index pairs of the measured lines, angle-major.
    pub fn measured_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.angles).flat_map(move |i| (0..self.offsets).filter(move |&j| self.is_measured(j)).map(move |j| (i, j)))
    }

    /// The measured lines, angle-major.
    pub fn lines(&self) -> Vec<Line> {
        self.measured_indices().map(|(i, j)| self.line(i, j)).collect()
    }
}

/// Sinogram values, angle-major; shadow lines hold `NaN` until completed.
#[derive(Clone, Debug, PartialEq)]
pub struct Sinogram {
    geometry: SinogramGeometry,
    values: Vec<f64>,
}

impl Sinogram {
    pub fn new(geometry: SinogramGeometry, values: Vec<f64>) -> Result<Self> {
        geometry.check()?;
        if values.len() != geometry.angles * geometry.offsets {
            return Err(Error::GridMismatch {
                reason: alloc::format!("{} values for {}x{} sinogram", values.len(), geometry.angles, geometry.offsets),
            });
        }
        Ok(Sinogram { geometry, values })
    }

    /// Evaluates `transform` on every measured line.
    pub fn project<F: FnMut(&Line) -> Result<f64>>(geometry: SinogramGeometry, mut transform: F) -> Result<Self> {
        geometry.check()?;
        let mut values = alloc::vec![f64::NAN; geometry.angles * geometry.offsets];
        for (i, j) in geometry.measured_indices() {
            values[i * geometry.offsets + j] = transform(&geometry.line(i, j))?;
        }
        Ok(Sinogram { geometry, values })
    }

    /// Arranges real X-ray data given on `geometry.lines()` (same order).
    pub fn from_xray(geometry: SinogramGeometry, data: &XRayData) -> Result<Self> {
        let values = match &data.values {
            XRayValues::Real(v) => v,
            XRayValues::Unimodular(_) => return Err(crate::error::invalid("sinogram needs real line integrals")),
        };
        let slots = matched_slots(&geometry, data)?;
        let mut out = alloc::vec![f64::NAN; geometry.angles * geometry.offsets];
        for (slot, v) in slots.into_iter().zip(values) {
            out[slot] = *v;
        }
        Sinogram::new(geometry, out)
    }

    pub fn geometry(&self) -> &SinogramGeometry {
        &self.geometry
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.geometry.offsets + j]
    }

    fn check_measured(&self) -> Result<()> {
        let g = &self.geometry;
        match g.measured_indices().find(|&(i, j)| !self.value(i, j).is_finite()) {
            Some((i, j)) => Err(Error::InsufficientCoverage { reason: alloc::format!("no finite value for line ({i}, {j})") }),
            None => Ok(()),
        }
    }

    /// Fills the shadow lines from the angular harmonics `|l| <= order` of the
    /// field on the annulus, recovered from the measured lines.
    pub fn complete(&self, order: usize) -> Result<Sinogram> {
        self.check_measured()?;
        let g = &self.geometry;
        if 2 * order >= g.angles {
            return Err(Error::InsufficientCoverage {
                reason: alloc::format!("harmonic order {order} needs more than {} angles", 2 * order),
            });
        }
        let shadow: Vec<usize> = (g.offsets / 2..g.offsets).filter(|&j| !g.is_measured(j)).collect();
        if shadow.is_empty() {
            return Ok(self.clone());
        }
        let outer: Vec<usize> = (g.offsets / 2..g.offsets).filter(|&j| g.is_measured(j)).collect();
        let mut nodes: Vec<f64> = outer.iter().map(|&j| g.offset(j)).collect();
        nodes.push(g.p_max);
        let harmonics = self.harmonics(&outer, order);
        let (gl_x, gl_w) = gauss_legendre(8);
        let radius = g.obstacle_radius;
        // filled[l][s]: harmonic l at shadow offset s
        let mut filled = Vec::with_capacity(order + 1);
        for (l, g_l) in harmonics.iter().enumerate() {
            let f_l = annulus_harmonic(&nodes, g_l, l, &gl_x, &gl_w);
            let slope = (f_l[1] - f_l[0]) * (1.0 / (nodes[1] - nodes[0]));
            let at_obstacle = f_l[0] + slope * (radius - nodes[0]);
            let row: Vec<Complex64> = shadow
                .iter()
                .map(|&j| {
                    let p = g.offset(j);
                    let mut v = profile_integral(p, radius, nodes[0], at_obstacle, f_l[0], l, &gl_x, &gl_w);
                    for m in 0..nodes.len() - 1 {
                        let right = f_l.get(m + 1).copied().unwrap_or_default();
                        v += profile_integral(p, nodes[m], nodes[m + 1], f_l[m], right, l, &gl_x, &gl_w);
                    }
                    v
                })
                .collect();
            filled.push(row);
        }
        let mut values = self.values.clone();
        for i in 0..g.angles {
            let theta = g.theta(i);
            for (s, &j) in shadow.iter().enumerate() {
                let eval = |phi: f64| {
                    let mut v = filled[0][s].re;
                    for (l, row) in filled.iter().enumerate().skip(1) {
                        v += 2.0 * (row[s] * Complex64::from_polar(1.0, l as f64 * phi)).re;
                    }
                    v
                };
                values[i * g.offsets + j] = eval(theta);
                values[i * g.offsets + (g.offsets - 1 - j)] = eval(theta + PI);
            }
        }
        Ok(Sinogram { geometry: self.geometry, values })
    }

    /// `g_l(p_j) = (1/2pi) int g(phi, p_j) e^{-i l phi} dphi` on the positive
    /// measured offsets, using `g(theta + pi, p) = g(theta, -p)`.
    fn harmonics(&self, outer: &[usize], order: usize) -> Vec<Vec<Complex64>> {
        let g = &self.geometry;
        let n = g.angles;
        let mut out = alloc::vec![alloc::vec![Complex64::default(); outer.len()]; order + 1];
        for (a, &j) in outer.iter().enumerate() {
            let mirror = g.offsets - 1 - j;
            for i in 0..2 * n {
                let phi = PI * i as f64 / n as f64;
                let v = if i < n { self.value(i, j) } else { self.value(i - n, mirror) };
                for (l, row) in out.iter_mut().enumerate() {
                    row[a] += Complex64::from_polar(v, -(l as f64) * phi);
                }
            }
        }
        for row in &mut out {
            for v in row.iter_mut() {
                *v /= (2 * n) as f64;
            }
        }
        out
    }

    /// Each row convolved with the apodized ramp filter.
    pub fn filtered(&self) -> Result<Vec<Vec<f64>>> {
        if let Some(k) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InsufficientCoverage {
                reason: alloc::format!("sinogram entry {k} is missing; complete the shadow first"),
            });
        }
        let g = &self.geometry;
        let m = g.offsets;
        let delta = g.spacing();
        let kernel: Vec<f64> = (0..m).map(|d| hann_ramp(d as i64, delta)).collect();
        Ok((0..g.angles)
            .map(|i| {
                let row = &self.values[i * m..(i + 1) * m];
                (0..m)
                    .map(|j| delta * row.iter().enumerate().map(|(k, v)| kernel[j.abs_diff(k)] * v).sum::<f64>())
                    .collect()
            })
            .collect())
    }
}

/// Slot index (angle-major) of each line of `data` in the geometry.
fn matched_slots(geometry: &SinogramGeometry, data: &XRayData) -> Result<Vec<usize>> {
    geometry.check()?;
    let expected: Vec<(usize, usize)> = geometry.measured_indices().collect();
    if expected.len() != data.len() {
        return Err(Error::GridMismatch {
            reason: alloc::format!("{} lines for a geometry with {} measured lines", data.len(), expected.len()),
        });
    }
    expected
        .iter()
        .zip(&data.lines)
        .map(|(&(i, j), line)| {
            let want = geometry.line(i, j);
            let dx = norm(&crate::geom::sub(&want.x0(), &line.x0())) + norm(&crate::geom::sub(&want.omega(), &line.omega()));
            if dx > 1e-9 {
                Err(Error::GridMismatch { reason: alloc::format!("line {} does not match sinogram slot ({i}, {j})", i) })
            } else {
                Ok(i * geometry.offsets + j)
            }
        })
        .collect()
}

/// Chebyshev polynomial `T_l(x)` for `|x| <= 1`.
fn chebyshev(l: usize, x: f64) -> f64 {
    (l as f64 * x.clamp(-1.0, 1.0).acos()).cos()
}

/// `2 int f(r) T_l(p / r) r dr / sqrt(r^2 - p^2)` over `[r0, r1]` for `f`
/// linear between `f0` and `f1`, in the variable `t = sqrt(r^2 - p^2)` which
/// removes the endpoint singularity.
#[allow(clippy::too_many_arguments)]
fn profile_integral<T>(p: f64, r0: f64, r1: f64, f0: T, f1: T, l: usize, gl_x: &[f64], gl_w: &[f64]) -> T
where
    T: Copy + core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T> + Default,
{
    let t0 = (r0 * r0 - p * p).max(0.0).sqrt();
    let t1 = (r1 * r1 - p * p).max(0.0).sqrt();
    let half = 0.5 * (t1 - t0);
    let mid = 0.5 * (t1 + t0);
    let mut acc = T::default();
    for (x, w) in gl_x.iter().zip(gl_w) {
        let t = mid + half * x;
        let r = (p * p + t * t).sqrt();
        let lam = (r - r0) / (r1 - r0);
        acc = acc + (f0 * (1.0 - lam) + f1 * lam) * (2.0 * w * half * chebyshev(l, p / r));
    }
    acc
}

/// Radial profile `f_l` at `nodes[..K]` (zero at the last node) whose
/// projections reproduce `g_l` at the offsets `nodes[..K]`: an upper
/// triangular system solved from the outside in.
fn annulus_harmonic(nodes: &[f64], g_l: &[Complex64], l: usize, gl_x: &[f64], gl_w: &[f64]) -> Vec<Complex64> {
    let k = nodes.len() - 1;
    let mut f = alloc::vec![Complex64::default(); k];
    for a in (0..k).rev() {
        let p = nodes[a];
        // contribution of the already known outer nodes, and the weight of node a
        let mut known = Complex64::default();
        let mut diag = 0.0;
        for m in a..k {
            let left: f64 = profile_integral(p, nodes[m], nodes[m + 1], 1.0, 0.0, l, gl_x, gl_w);
            let right: f64 = profile_integral(p, nodes[m], nodes[m + 1], 0.0, 1.0, l, gl_x, gl_w);
            if m == a {
                diag += left;
            } else {
                known += f[m] * left;
            }
            if m + 1 < k {
                known += f[m + 1] * right;
            }
        }
        f[a] = (g_l[a] - known) / diag;
    }
    f
}

/// Ramp filter with Hann window, cut off at `1 / (2 delta)`, sampled at
/// `d * delta`: `h_d = J_d / 2 + (J_{d-1} + J_{d+1}) / 4` with `J` the
/// band-limited ramp.
fn hann_ramp(d: i64, delta: f64) -> f64 {
    let ramp = |d: i64| -> f64 {
        if d == 0 {
            1.0 / (4.0 * delta * delta)
        } else if d % 2 != 0 {
            -1.0 / (PI * PI * (d * d) as f64 * delta * delta)
        } else {
            0.0
        }
    };
    0.5 * ramp(d) + 0.25 * (ramp(d - 1) + ramp(d + 1))
}

/// Bound on the growth `cosh(l acosh(P / R))` of data errors in harmonic `l`
/// of the shadow completion.
pub const MAX_COMPLETION_GAIN: f64 = 1e5;

/// Completion order used by default for a geometry.
pub fn default_completion_order(geometry: &SinogramGeometry) -> usize {
    let reach = (geometry.p_max / geometry.obstacle_radius.max(1e-300)).acosh();
    let by_gain = if reach > 0.0 { (MAX_COMPLETION_GAIN.acosh() / reach).floor() as usize } else { usize::MAX };
    by_gain.min((geometry.angles - 1) / 2)
}

/// Options of the inversion.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RadonOptions {
    /// Highest angular harmonic used to complete the shadow; `None` picks the
    /// largest order whose noise amplification stays below
    /// [`MAX_COMPLETION_GAIN`].
    pub completion_order: Option<usize>,
    /// Output nodes per axis; `None` uses the offset spacing.
    pub grid_points: Option<usize>,
    /// Outer radius of the certified annulus; `None` uses the offset range.
    pub r_max: Option<f64>,
}

/// A reconstruction on a square grid, certified on the annulus
/// `inner_radius < |x| <= outer_radius` and zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub field: GridField,
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// Angular order of the shadow completion.
    pub completion_order: usize,
}

impl Reconstruction {
    pub fn in_annulus(&self, x: &Vec3) -> bool {
        let r = norm(x);
        r > self.inner_radius && r <= self.outer_radius
    }

    /// Grid nodes in the annulus with their values.
    pub fn annulus_samples(&self) -> impl Iterator<Item = (Vec3, f64)> + '_ {
        self.field.samples().filter(|(x, _)| self.in_annulus(x)).map(|(x, v)| (x, v[0]))
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        if self.in_annulus(x) {
            self.field.eval(x)[0]
        } else {
            0.0
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.annulus_samples().fold(0.0, |m, (_, v)| m.max(v.abs()))
    }

    /// `||rec - f|| / ||f||` over the annulus nodes (absolute if `f` vanishes there).
    pub fn relative_l2_error<F: Fn(&Vec3) -> f64>(&self, f: F) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (x, v) in self.annulus_samples() {
            let e = f(&x);
            num += (v - e) * (v - e);
            den += e * e;
        }
        if den > 0.0 {
            (num / den).sqrt()
        } else {
            num.sqrt()
        }
    }
}

/// Completes, filters and backprojects a sinogram.
pub fn invert_sinogram(sinogram: &Sinogram, options: &RadonOptions) -> Result<Reconstruction> {
    let g = *sinogram.geometry();
    let order = options.completion_order.unwrap_or_else(|| default_completion_order(&g));
    let complete = sinogram.complete(order)?;
    let q = complete.filtered()?;
    let r_max = options.r_max.unwrap_or(g.p_max).min(g.p_max);
    if r_max <= g.obstacle_radius {
        return Err(Error::InsufficientCoverage { reason: "empty annulus".into() });
    }
    let n = options.grid_points.unwrap_or_else(|| (2.0 * r_max / g.spacing()).round() as usize + 1).max(3);
    let h = 2.0 * r_max / (n - 1) as f64;
    let trig: Vec<(f64, f64)> = (0..g.angles).map(|i| g.theta(i).sin_cos()).collect();
    let delta = g.spacing();
    let weight = PI / g.angles as f64;
    let field = GridField::from_fn(2, [-r_max, -r_max, 0.0], [h, h, 1.0], [n, n, 1], 1, |x| {
        let r = norm(x);
        if r <= g.obstacle_radius || r > r_max {
            return alloc::vec![0.0];
        }
        let mut acc = 0.0;
        for (row, (s, c)) in q.iter().zip(&trig) {
            let p = x[0] * c + x[1] * s;
            let u = (p + g.p_max) / delta - 0.5;
            let j = u.floor();
            let t = u - j;
            let at = |k: f64| if k >= 0.0 && (k as usize) < g.offsets { row[k as usize] } else { 0.0 };
            acc += (1.0 - t) * at(j) + t * at(j + 1.0);
        }
        alloc::vec![weight * acc]
    })?;
    Ok(Reconstruction { field, inner_radius: g.obstacle_radius, outer_radius: r_max, completion_order: order })
}

/// Filtered-backprojection estimate of a scalar potential on the annulus
/// from its X-ray transform on `geometry.lines()`.
pub fn radon_invert_scalar(data: &XRayData, geometry: &SinogramGeometry, options: &RadonOptions) -> Result<Reconstruction> {
    invert_sinogram(&Sinogram::from_xray(*geometry, data)?, options)
}

/// The curl `B = d1 A2 - d2 A1` on the annulus from vector X-ray data on
/// `geometry.lines()`: the offset derivative of `int A . omega` along the
/// sinogram lines is the Radon transform of `B`. Unimodular data are
/// differentiated through their phase increments.
pub fn recover_field_2d(data: &XRayData, geometry: &SinogramGeometry, options: &RadonOptions) -> Result<Reconstruction> {
    let slots = matched_slots(geometry, data)?;
    let m = geometry.offsets;
    let mut phase = alloc::vec![f64::NAN; geometry.angles * m];
    let unimodular = matches!(data.values, XRayValues::Unimodular(_));
    for (idx, slot) in slots.into_iter().enumerate() {
        phase[slot] = match &data.values {
            XRayValues::Real(v) => v[idx],
            XRayValues::Unimodular(v) => v[idx].arg(),
        };
    }
    let diff = |a: f64, b: f64| if unimodular { wrap_phase(a - b) } else { a - b };
    let delta = geometry.spacing();
    let mut derivative = alloc::vec![f64::NAN; geometry.angles * m];
    for i in 0..geometry.angles {
        let row = &phase[i * m..(i + 1) * m];
        for j in 0..m {
            if !geometry.is_measured(j) {
                continue;
            }
            let ok = |k: isize| k >= 0 && (k as usize) < m && geometry.is_measured(k as usize) && (geometry.offset(k as usize) * geometry.offset(j) > 0.0);
            let j_ = j as isize;
            let v = if ok(j_ - 1) && ok(j_ + 1) {
                diff(row[j + 1], row[j - 1]) / (2.0 * delta)
            } else if ok(j_ + 1) && ok(j_ + 2) {
                (4.0 * diff(row[j + 1], row[j]) - diff(row[j + 2], row[j])) / (2.0 * delta)
            } else if ok(j_ - 1) && ok(j_ - 2) {
                (diff(row[j - 2], row[j]) - 4.0 * diff(row[j - 1], row[j])) / (2.0 * delta)
            } else {
                return Err(Error::InsufficientCoverage { reason: "too few offsets to differentiate".into() });
            };
            derivative[i * m + j] = v;
        }
    }
    invert_sinogram(&Sinogram::new(*geometry, derivative)?, options)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometry() -> SinogramGeometry {
        SinogramGeometry::new(90, 128, 3.0, 1.0).unwrap()
    }

    #[test]
    fn ramp_filter_has_zero_dc_response() {
        let s: f64 = (-4000i64..=4000).map(|d| hann_ramp(d, 1.0)).sum();
        assert!(s.abs() < 1e-4, "{s}");
        // the window smears the centre over the first neighbours; further out the lobes are negative
        assert!(hann_ramp(0, 1.0) > 0.0 && hann_ramp(2, 1.0) < 0.0);
    }

    #[test]
    fn coverage_is_checked() {
        assert!(matches!(SinogramGeometry::new(8, 128, 3.0, 1.0), Err(Error::InsufficientCoverage { .. })));
        assert!(matches!(SinogramGeometry::new(90, 128, 1.0, 1.0), Err(Error::InsufficientCoverage { .. })));
        assert!(matches!(SinogramGeometry::new(90, 33, 3.0, 1.0), Err(Error::InsufficientCoverage { .. })));
    }

    #[test]
    fn zero_data_gives_zero_field() {
        let s = Sinogram::project(geometry(), |_| Ok(0.0)).unwrap();
        let rec = invert_sinogram(&s, &RadonOptions::default()).unwrap();
        assert_eq!(rec.max_abs(), 0.0);
    }

    #[test]
    fn completion_reproduces_radial_projections() {
        // f(r) = exp(-(r - 1.8)^2 / 0.08): shadow values vs direct quadrature
        let f = |r: f64| (-(r - 1.8) * (r - 1.8) / 0.08).exp();
        let proj = |p: f64| {
            crate::quad::integrate(
                |s: f64| {
                    let r = (p * p + s * s).sqrt();
                    if r > 1.0 {
                        f(r)
                    } else {
                        0.0
                    }
                },
                -3.0,
                3.0,
                1e-12,
                1e-12,
            )
            .value
        };
        let g = geometry();
        let s = Sinogram::project(g, |l| Ok(proj(l.distance_to_origin()))).unwrap();
        let c = s.complete(4).unwrap();
        for j in 0..g.offsets {
            if !g.is_measured(j) {
                let want = proj(g.offset(j).abs());
                assert!((c.value(7, j) - want).abs() < 2e-3 * want.abs().max(0.1), "{j}: {} vs {want}", c.value(7, j));
            }
        }
    }
}
