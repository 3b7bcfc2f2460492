//! Structured planar scattering kernels and the gauge action on them.
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use super::channels::{ab_channel, ChannelSpectrum};
use crate::angular::AngularFunction;
use crate::error::{Error, Result};
use crate::fields::{GaugeElement, Phase};
use crate::geom::Dim;

/// Grid cells around the diagonal left out of kernel comparisons.
pub const DIAGONAL_MARGIN: usize = 5;
/// Channels compared by [`kernel_distance`].
pub const COMPARED_CHANNELS: usize = 32;

/// Smooth remainder `S'(theta_i, theta_j)` on the grid `theta_i = 2 pi i / M`
/// with its declared bound `|S'| <= C |theta - theta'|^{-delta}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Remainder {
    size: usize,
    values: Vec<Complex64>,
    c: f64,
    delta: f64,
}

impl Remainder {
    /// Validates the shape and the bound (circular distance, diagonal skipped).
    pub fn new(size: usize, values: Vec<Complex64>, c: f64, delta: f64) -> Result<Self> {
        if size < 8 || !size.is_multiple_of(2) {
            return Err(crate::error::invalid("remainder grid size must be even and at least 8"));
        }
        if values.len() != size * size {
            return Err(Error::GridMismatch { reason: alloc::format!("{} values for a {size}x{size} grid", values.len()) });
        }
        if !(delta > 0.0 && delta < 1.0) || !(c >= 0.0) {
            return Err(crate::error::invalid("remainder bound needs C >= 0 and 0 < delta < 1"));
        }
        let r = Remainder { size, values, c, delta };
        let ratio = r.bound_ratio();
        if ratio > 1.0 {
            return Err(Error::RemainderBoundViolated { ratio });
        }
        Ok(r)
    }

    pub fn zero(size: usize) -> Result<Self> {
        Remainder::new(size, alloc::vec![Complex64::default(); size * size], 0.0, 0.5)
    }

    /// Samples `f(theta, theta')` on the grid.
    pub fn from_fn<F: FnMut(f64, f64) -> Complex64>(size: usize, c: f64, delta: f64, mut f: F) -> Result<Self> {
        let h = TAU / size as f64;
        let mut values = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                values.push(f(h * i as f64, h * j as f64));
            }
        }
        Remainder::new(size, values, c, delta)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn bound(&self) -> (f64, f64) {
        (self.c, self.delta)
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.size + j]
    }

    /// `max |S'_ij| / (C d_ij^{-delta})` off the diagonal.
    pub fn bound_ratio(&self) -> f64 {
        let h = TAU / self.size as f64;
        let mut worst: f64 = 0.0;
        for i in 0..self.size {
            for j in 0..self.size {
                if i == j {
                    continue;
                }
                let v = self.at(i, j).norm();
                if v == 0.0 {
                    continue;
                }
                let d = h * circular(i, j, self.size) as f64;
                let bound = self.c * d.powf(-self.delta);
                worst = worst.max(if bound > 0.0 { v / bound } else { f64::INFINITY });
            }
        }
        worst
    }

    /// Periodic trigonometric interpolation at an arbitrary point.
    pub fn eval(&self, theta: f64, theta_prime: f64) -> Complex64 {
        let a = dirichlet_weights(self.size, theta);
        let b = dirichlet_weights(self.size, theta_prime);
        let mut acc = Complex64::default();
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0.0 {
                continue;
            }
            let row = &self.values[i * self.size..(i + 1) * self.size];
            let s: Complex64 = row.iter().zip(&b).map(|(v, bj)| v * bj).sum();
            acc += s * ai;
        }
        acc
    }
}

fn circular(i: usize, j: usize, m: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(m - d)
}

/// Weights of the even-size periodic interpolant at `x`.
fn dirichlet_weights(m: usize, x: f64) -> Vec<f64> {
    let h = TAU / m as f64;
    (0..m)
        .map(|i| {
            let d = x - h * i as f64;
            let half = 0.5 * d;
            if half.sin().abs() < 1e-14 {
                1.0
            } else {
                (0.5 * m as f64 * d).sin() / (m as f64 * half.tan())
            }
        })
        .collect()
}

/// Planar kernel
/// `S(theta, theta') = (-1)^w e^{i w (theta - theta')} e^{i P_out(theta) - i P_in(theta' + pi)}
///   (S_b(theta - theta') + S'(theta, theta'))`
/// with `w = [alpha] + winding` and `S_b` the convolution kernel of the
/// reduced flux `b = alpha - [alpha]` in `[0, 1)`.
///
/// For `alpha` in `[0, 1)` and zero winding this is the usual form with the
/// remainder next to `S_alpha`; in general the remainder is attached to the
/// reduced flux, so configurations whose fluxes differ by an integer share it.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringKernel {
    energy: f64,
    alpha: f64,
    winding: i64,
    phase_out: AngularFunction,
    phase_in: AngularFunction,
    remainder: Remainder,
}

/// Builds a kernel; the remainder bound was validated on construction.
pub fn assemble_kernel(
    alpha: f64,
    a0_in: AngularFunction,
    a0_out: AngularFunction,
    remainder: Remainder,
    energy: f64,
) -> Result<ScatteringKernel> {
    if !(energy > 0.0) || !alpha.is_finite() {
        return Err(crate::error::invalid("kernel needs a positive energy and a finite flux"));
    }
    let ratio = remainder.bound_ratio();
    if ratio > 1.0 {
        return Err(Error::RemainderBoundViolated { ratio });
    }
    Ok(ScatteringKernel { energy, alpha, winding: 0, phase_out: a0_out, phase_in: a0_in, remainder })
}

impl ScatteringKernel {
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Winding accumulated from gauge transformations.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// Flux of the gauge-transformed potential, `alpha + winding`.
    pub fn effective_flux(&self) -> f64 {
        self.alpha + self.winding as f64
    }

    pub fn phase_out(&self) -> &AngularFunction {
        &self.phase_out
    }

    pub fn phase_in(&self) -> &AngularFunction {
        &self.phase_in
    }

    pub fn remainder(&self) -> &Remainder {
        &self.remainder
    }

    pub fn grid_size(&self) -> usize {
        self.remainder.size
    }

    pub fn theta(&self, i: usize) -> f64 {
        TAU * i as f64 / self.remainder.size as f64
    }

    /// Whether the flux is an integer (no principal-value singularity).
    pub fn is_integer_flux(&self) -> bool {
        self.alpha == self.alpha.round()
    }

    fn total_winding(&self) -> i64 {
        self.alpha.floor() as i64 + self.winding
    }

    fn reduced_flux(&self) -> f64 {
        self.alpha - self.alpha.floor()
    }

    /// `sin(b pi) / pi`, the strength of the principal-value part.
    pub fn singular_strength(&self) -> f64 {
        libm::sin(PI * self.reduced_flux()) / PI
    }

    /// Eigenvalue of channel `k` of the convolution part:
    /// `(-1)^w lambda_b(k - w)`.
    pub fn channel(&self, k: i64) -> Complex64 {
        let w = self.total_winding();
        let sign = if w.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        ab_channel(self.reduced_flux(), k - w) * sign
    }

    pub fn channel_spectrum(&self, n: usize) -> ChannelSpectrum {
        let n = n as i64;
        ChannelSpectrum::new((-n..=n).map(|k| self.channel(k)).collect()).expect("closed-form channels are unimodular")
    }

    fn prefactor(&self, theta: f64, theta_prime: f64, phase_out: f64, phase_in: f64) -> Complex64 {
        let w = self.total_winding();
        let sign = if w.rem_euclid(2) == 0 { 0.0 } else { PI };
        Complex64::from_polar(1.0, sign + w as f64 * (theta - theta_prime) + phase_out - phase_in)
    }

    fn off_diagonal(&self, t: f64) -> Complex64 {
        let s = self.singular_strength();
        if s == 0.0 {
            return Complex64::default();
        }
        Complex64::new(0.0, s) / (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t))
    }

    /// Kernel value off the diagonal; on the diagonal the kernel is a distribution.
    pub fn eval(&self, theta: f64, theta_prime: f64) -> Result<Complex64> {
        let t = theta - theta_prime;
        if (t / TAU - (t / TAU).round()).abs() < 1e-14 {
            return Err(crate::error::invalid("the kernel is a distribution on the diagonal"));
        }
        let pre = self.prefactor(theta, theta_prime, self.phase_out.eval(theta), self.phase_in.eval(theta_prime + PI));
        Ok(pre * (self.off_diagonal(t) + self.remainder.eval(theta, theta_prime)))
    }

    /// All off-diagonal grid values (row-major, the diagonal set to zero).
    pub fn grid_values(&self) -> Vec<Complex64> {
        let m = self.grid_size();
        let out_phase: Vec<f64> = (0..m).map(|i| self.phase_out.eval(self.theta(i))).collect();
        let in_phase: Vec<f64> = (0..m).map(|j| self.phase_in.eval(self.theta(j) + PI)).collect();
        let singular: Vec<Complex64> = (0..m).map(|d| if d == 0 { Complex64::default() } else { self.off_diagonal(self.theta(d)) }).collect();
        let mut v = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    v.push(Complex64::default());
                    continue;
                }
                let pre = self.prefactor(self.theta(i), self.theta(j), out_phase[i], in_phase[j]);
                v.push(pre * (singular[(i + m - j) % m] + self.remainder.at(i, j)));
            }
        }
        v
    }
}

/// `e^{i(m theta + phi(theta))} S e^{-i(m theta' + phi)(theta' + pi)}` as a
/// kernel: winding `+ m`, both prefactor phases `+ phi`. The short-range part
/// of the gauge element does not act on the kernel.
pub fn apply_gauge_to_kernel(kernel: &ScatteringKernel, g: &GaugeElement) -> Result<ScatteringKernel> {
    if g.dim() != Dim::Two {
        return Err(Error::DimensionMismatch { expected: 2, found: g.dim().n() });
    }
    if g.m == 0 && g.phase.is_zero() {
        return Ok(kernel.clone());
    }
    let Phase::Circle(phi) = &g.phase else {
        return Err(Error::DimensionMismatch { expected: 2, found: 3 });
    };
    Ok(ScatteringKernel {
        winding: kernel.winding + g.m,
        phase_out: kernel.phase_out.add(phi),
        phase_in: kernel.phase_in.add(phi),
        ..kernel.clone()
    })
}

/// Where two kernels differ most.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelDistance {
    /// `max |S1 - S2|` over grid points more than [`DIAGONAL_MARGIN`] cells off the diagonal.
    pub grid: f64,
    /// Location `(theta, theta')` of the grid maximum.
    pub at: (f64, f64),
    /// `max |lambda1_k - lambda2_k|` for `|k| <= COMPARED_CHANNELS`.
    pub channels: f64,
    /// Channel index of that maximum.
    pub channel: i64,
}

impl KernelDistance {
    pub fn total(&self) -> f64 {
        self.grid + self.channels
    }
}

/// Compares grid values away from the diagonal and the channel spectra.
pub fn kernel_distance_parts(s1: &ScatteringKernel, s2: &ScatteringKernel) -> Result<KernelDistance> {
    if s1.grid_size() != s2.grid_size() {
        return Err(Error::GridMismatch { reason: alloc::format!("grid sizes {} and {}", s1.grid_size(), s2.grid_size()) });
    }
    if s1.energy != s2.energy {
        return Err(Error::GridMismatch { reason: alloc::format!("energies {} and {}", s1.energy, s2.energy) });
    }
    let m = s1.grid_size();
    let (a, b) = (s1.grid_values(), s2.grid_values());
    let mut out = KernelDistance { grid: 0.0, at: (0.0, 0.0), channels: 0.0, channel: 0 };
    for i in 0..m {
        for j in 0..m {
            if circular(i, j, m) <= DIAGONAL_MARGIN {
                continue;
            }
            let d = (a[i * m + j] - b[i * m + j]).norm();
            if d > out.grid {
                out.grid = d;
                out.at = (s1.theta(i), s1.theta(j));
            }
        }
    }
    let n = COMPARED_CHANNELS as i64;
    for k in -n..=n {
        let d = (s1.channel(k) - s2.channel(k)).norm();
        if d > out.channels {
            out.channels = d;
            out.channel = k;
        }
    }
    Ok(out)
}

/// [`KernelDistance::total`] of the two kernels.
pub fn kernel_distance(s1: &ScatteringKernel, s2: &ScatteringKernel) -> Result<f64> {
    kernel_distance_parts(s1, s2).map(|d| d.total())
}
