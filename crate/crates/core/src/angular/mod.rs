//! Smooth functions on the circle and on the 2-sphere.
//!
//! [`AngularFunction`] is a truncated Fourier series of a real 2π-periodic
//! function. [`SphereFunction`] samples a function on an antipodally closed
//! icosahedral grid.
mod sphere;

pub use sphere::{Interpolation, SphereFunction, SphereGrid};

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Default truncation order N (coefficients for |k| <= N).
pub const DEFAULT_ORDER: usize = 64;

/// A real 2π-periodic function stored as `sum_{|k|<=N} c_k e^{ik theta}`
/// with `c_{-k} = conj(c_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularFunction {
    // index k + N
    coeffs: Vec<Complex64>,
}

impl AngularFunction {
    pub fn zero(order: usize) -> Self {
        AngularFunction { coeffs: alloc::vec![Complex64::new(0.0, 0.0); 2 * order + 1] }
    }

    pub fn constant(order: usize, value: f64) -> Self {
        let mut f = Self::zero(order);
        f.coeffs[order] = Complex64::new(value, 0.0);
        f
    }

    /// `a0 + sum_k (a_k cos k theta + b_k sin k theta)` for terms `(k, a_k, b_k)`, `k >= 1`.
    pub fn from_cos_sin(order: usize, a0: f64, terms: &[(usize, f64, f64)]) -> Result<Self> {
        let mut f = Self::constant(order, a0);
        for &(k, a, b) in terms {
            if k == 0 || k > order {
                return Err(crate::error::invalid("cos/sin term index outside 1..=order"));
            }
            let c = Complex64::new(0.5 * a, -0.5 * b);
            f.coeffs[order + k] += c;
            f.coeffs[order - k] += c.conj();
        }
        Ok(f)
    }

    /// Builds a function from `(k, re, im)` coefficient triples.
    ///
    /// Both `k` and `-k` must be supplied with conjugate values (a triple
    /// with `k = 0` must be real); repeated indices are summed.
    pub fn from_triples(order: usize, triples: &[(i64, f64, f64)]) -> Result<Self> {
        let n = order as i64;
        let mut f = Self::zero(order);
        let mut scale: f64 = 0.0;
        for &(k, re, im) in triples {
            if k.abs() > n {
                return Err(crate::error::invalid("coefficient index exceeds truncation order"));
            }
            f.coeffs[(k + n) as usize] += Complex64::new(re, im);
            scale = scale.max(re.abs()).max(im.abs());
        }
        let tol = 1e-12 * scale.max(1.0);
        for k in 0..=n {
            let a = f.coeffs[(n + k) as usize];
            let b = f.coeffs[(n - k) as usize];
            if (a - b.conj()).norm() > tol {
                return Err(Error::NotReal { k });
            }
        }
        f.symmetrize();
        Ok(f)
    }

    /// Discrete Fourier analysis of `2N+1` equispaced samples `f(2 pi j/(2N+1))`.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let m = samples.len();
        if m == 0 || m.is_multiple_of(2) {
            return Err(crate::error::invalid("need an odd number (2N+1) of samples"));
        }
        let order = (m - 1) / 2;
        let mut f = Self::zero(order);
        for k in 0..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                // exact index reduction keeps the phase argument small
                let idx = (k * j) % m;
                let t = -TAU * idx as f64 / m as f64;
                acc += Complex64::new(v * t.cos(), v * t.sin());
            }
            let c = acc / m as f64;
            f.coeffs[order + k] = c;
            f.coeffs[order - k] = c.conj();
        }
        f.coeffs[order].im = 0.0;
        Ok(f)
    }

    /// Samples `g` on `2N+1` nodes and transforms.
    pub fn from_fn<G: FnMut(f64) -> f64>(order: usize, mut g: G) -> Self {
        let m = 2 * order + 1;
        let samples: Vec<f64> = (0..m).map(|j| g(TAU * j as f64 / m as f64)).collect();
        Self::from_samples(&samples).expect("odd sample count")
    }

    fn symmetrize(&mut self) {
        let n = self.order();
        self.coeffs[n].im = 0.0;
        for k in 1..=n {
            let avg = 0.5 * (self.coeffs[n + k] + self.coeffs[n - k].conj());
            self.coeffs[n + k] = avg;
            self.coeffs[n - k] = avg.conj();
        }
    }

    pub fn order(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// Coefficient `c_k`; zero beyond the truncation order.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.order() as i64;
        if k.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    /// `(k, c_k)` for `k = -N..=N`.
    pub fn coefficients(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.order() as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - n, *c))
    }

    pub fn to_triples(&self) -> Vec<(i64, f64, f64)> {
        self.coefficients().map(|(k, c)| (k, c.re, c.im)).collect()
    }

    /// Mean value `(1/2pi) int f`, i.e. `c_0`.
    pub fn mean(&self) -> f64 {
        self.coeffs[self.order()].re
    }

    /// `max_k |c_k|`, the scale used for relative tolerances.
    pub fn max_coefficient(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Real value at angle `theta`.
    pub fn eval(&self, theta: f64) -> f64 {
        let n = self.order();
        let z = Complex64::new(theta.cos(), theta.sin());
        let mut p = z;
        let mut acc = self.coeffs[n].re;
        for k in 1..=n {
            acc += 2.0 * (self.coeffs[n + k] * p).re;
            p *= z;
        }
        acc
    }

    /// Full complex sum `sum_k c_k e^{ik theta}`; its imaginary part vanishes
    /// up to roundoff for every stored function.
    pub fn eval_complex(&self, theta: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coefficients() {
            let t = k as f64 * theta;
            acc += c * Complex64::new(t.cos(), t.sin());
        }
        acc
    }

    fn direction_power_sums(&self, z: Complex64) -> (f64, f64) {
        // even and odd parts of 2 Re sum_{k>=1} c_k z^k, accumulated separately so
        // that z -> -z flips the odd part bit-exactly
        let n = self.order();
        let mut even = self.coeffs[n].re;
        let mut odd = 0.0;
        let mut p = z;
        for k in 1..=n {
            let term = 2.0 * (self.coeffs[n + k] * p).re;
            if k % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
            p *= z;
        }
        (even, odd)
    }

    /// Value at the direction `omega = (cos theta, sin theta)` (first two components).
    pub fn eval_direction(&self, omega: &Vec3) -> f64 {
        let (e, o) = self.direction_power_sums(unit_complex(omega));
        e + o
    }

    /// `f(omega) - f(-omega)`; antisymmetric in `omega` bit-for-bit.
    pub fn antipodal_difference(&self, omega: &Vec3) -> f64 {
        let (_, o) = self.direction_power_sums(unit_complex(omega));
        2.0 * o
    }

    /// `f(theta) - f(theta + pi)`.
    pub fn antipodal_difference_at(&self, theta: f64) -> f64 {
        self.antipodal_difference(&[theta.cos(), theta.sin(), 0.0])
    }

    pub fn derivative(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = i as f64 - self.order() as f64;
            *c *= Complex64::new(0.0, k);
        }
        out
    }

    /// Zero-mean `g` with `g' = self` (coefficient division by `ik`).
    pub fn zero_mean_antiderivative(&self, tol_mean: f64) -> Result<Self> {
        let scale = self.max_coefficient().max(1.0);
        let mean = self.mean();
        if mean.abs() >= tol_mean * scale {
            return Err(Error::NonzeroMean { mean });
        }
        let n = self.order();
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = i as f64 - n as f64;
            *c = if i == n { Complex64::new(0.0, 0.0) } else { *c / Complex64::new(0.0, k) };
        }
        Ok(out)
    }

    /// Copy with truncation order `order` (padding with zeros or truncating).
    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zero(order);
        let n = order as i64;
        for (k, c) in self.coefficients() {
            if k.abs() <= n {
                out.coeffs[(k + n) as usize] = c;
            }
        }
        out
    }

    fn combine(&self, other: &Self, a: f64, b: f64) -> Self {
        let order = self.order().max(other.order());
        let mut out = Self::zero(order);
        let n = order as i64;
        for k in -n..=n {
            out.coeffs[(k + n) as usize] = self.coefficient(k) * a + other.coefficient(k) * b;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, 1.0, -1.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// Adds a constant to the mean.
    pub fn shifted_by(&self, value: f64) -> Self {
        let mut out = self.clone();
        let n = out.order();
        out.coeffs[n].re += value;
        out
    }

    /// `theta -> f(theta + shift)`.
    pub fn translated(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = i as f64 - self.order() as f64;
            let t = k * shift;
            *c *= Complex64::new(t.cos(), t.sin());
        }
        out.symmetrize();
        out
    }

    /// Part with odd Fourier indices, i.e. `(f(theta) - f(theta+pi))/2`.
    pub fn odd_part(&self) -> Self {
        let mut out = self.clone();
        let n = self.order() as i64;
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if (i as i64 - n) % 2 == 0 {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Largest `|f - g|` over `samples` equispaced points.
    pub fn max_difference(&self, other: &Self, samples: usize) -> f64 {
        (0..samples)
            .map(|j| {
                let t = TAU * j as f64 / samples as f64;
                (self.eval(t) - other.eval(t)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest coefficient difference.
    pub fn coefficient_distance(&self, other: &Self) -> f64 {
        let n = self.order().max(other.order()) as i64;
        (-n..=n).map(|k| (self.coefficient(k) - other.coefficient(k)).norm()).fold(0.0, f64::max)
    }
}

fn unit_complex(omega: &Vec3) -> Complex64 {
    let r = (omega[0] * omega[0] + omega[1] * omega[1]).sqrt();
    Complex64::new(omega[0] / r, omega[1] / r)
}

/// Wraps an angle difference into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = libm::remainder(x, TAU);
    if y <= -PI {
        y += TAU;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos1() -> AngularFunction {
        AngularFunction::from_triples(4, &[(1, 0.5, 0.0), (-1, 0.5, 0.0)]).unwrap()
    }

    #[test]
    fn eval_cosine_and_constant() {
        assert!((cos1().eval(0.0) - 1.0).abs() < 1e-15);
        let c = AngularFunction::constant(3, 0.7);
        for t in [0.0, 1.0, 5.5] {
            assert_eq!(c.eval(t), 0.7);
        }
    }

    #[test]
    fn antiderivative_of_cosine_is_sine() {
        let g = cos1().zero_mean_antiderivative(1e-10).unwrap();
        let sine = AngularFunction::from_cos_sin(4, 0.0, &[(1, 0.0, 1.0)]).unwrap();
        assert!(g.coefficient_distance(&sine) < 1e-15);
        let z = AngularFunction::zero(4).zero_mean_antiderivative(1e-10).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn antiderivative_rejects_flux() {
        let f = AngularFunction::constant(2, 0.3);
        assert!(matches!(f.zero_mean_antiderivative(1e-10), Err(Error::NonzeroMean { .. })));
    }

    #[test]
    fn antiderivative_matches_finite_differences() {
        let f = AngularFunction::from_cos_sin(8, 0.0, &[(1, 1.0, 0.0), (2, 0.0, 3.0)]).unwrap();
        let g = f.zero_mean_antiderivative(1e-10).unwrap();
        // eighth-order central difference: truncation ~ h^8 |g^(9)| / 630
        let h = 0.02;
        let w = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let mut worst: f64 = 0.0;
        for j in 0..720 {
            let t = TAU * j as f64 / 720.0;
            let d: f64 = w
                .iter()
                .enumerate()
                .map(|(i, wi)| {
                    let s = (i + 1) as f64 * h;
                    wi * (g.eval(t + s) - g.eval(t - s))
                })
                .sum::<f64>()
                / h;
            worst = worst.max((d - f.eval(t)).abs());
        }
        assert!(worst < 1e-12, "{worst}");
        // spectral route is exact
        let back = g.derivative();
        assert!(back.coefficient_distance(&f) < 1e-15);
    }

    #[test]
    fn eval_matches_direct_summation() {
        let f = AngularFunction::from_cos_sin(
            5,
            0.2,
            &[(1, 0.3, -0.7), (2, 1.1, 0.4), (3, -0.2, 0.9), (5, 0.05, 0.01)],
        )
        .unwrap();
        let t: f64 = 0.3;
        let direct = 0.2 + 0.3 * t.cos() - 0.7 * t.sin() + 1.1 * (2.0 * t).cos()
            + 0.4 * (2.0 * t).sin()
            - 0.2 * (3.0 * t).cos()
            + 0.9 * (3.0 * t).sin()
            + 0.05 * (5.0 * t).cos()
            + 0.01 * (5.0 * t).sin();
        assert!((f.eval(t) - direct).abs() < 1e-14);
        assert!(f.eval_complex(t).im.abs() < 1e-14);
        assert!((f.eval(t) - f.eval(t + TAU)).abs() < 1e-14);
    }

    #[test]
    fn antipodal_difference_examples() {
        let cos2 = AngularFunction::from_cos_sin(4, 0.0, &[(2, 1.0, 0.0)]).unwrap();
        let sin1 = AngularFunction::from_cos_sin(4, 0.0, &[(1, 0.0, 1.0)]).unwrap();
        for t in [0.0, 0.4, 2.0] {
            assert!(cos2.antipodal_difference_at(t).abs() < 1e-15);
        }
        let d = sin1.antipodal_difference(&[0.0, 1.0, 0.0]);
        assert!((d - 2.0).abs() < 1e-15);
        let w = [0.6, -0.8, 0.0];
        assert_eq!(sin1.antipodal_difference(&w), -sin1.antipodal_difference(&[-0.6, 0.8, 0.0]));
    }

    #[test]
    fn samples_round_trip() {
        let f = AngularFunction::from_cos_sin(6, 1.0, &[(3, 0.5, 0.25), (6, 0.0, -1.0)]).unwrap();
        let g = AngularFunction::from_fn(6, |t| f.eval(t));
        assert!(g.coefficient_distance(&f) < 1e-14);
    }

    #[test]
    fn realness_is_enforced() {
        assert!(matches!(
            AngularFunction::from_triples(2, &[(1, 1.0, 0.0)]),
            Err(Error::NotReal { k: 1 })
        ));
    }

    #[test]
    fn wrap_phase_range() {
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-0.5) + 0.5).abs() < 1e-15);
    }
}
