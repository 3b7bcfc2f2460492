//! Quadrature and extrapolation primitives.
//!
//! Adaptive Gauss–Kronrod (7/15) bisection, Gauss–Legendre rules, Neville
//! extrapolation, and a helper for integrals over long symmetric ranges.
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        let s = f1 + f2;
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    (kron, (kron - gauss).magnitude())
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// error drops below `max(abs_tol, rel_tol * |I|)` or `max_intervals` is hit.
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Estimate<T> {
    integrate_with(&mut f, a, b, abs_tol, rel_tol, 2000)
}

pub(crate) fn integrate_with<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Estimate<T> {
    if a == b {
        return Estimate { value: T::zero(), error: 0.0 };
    }
    let (v, e) = gk15(f, a, b);
    let mut parts: Vec<(f64, f64, T, f64)> = alloc::vec![(a, b, v, e)];
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in parts.iter().enumerate() {
            total = total + p.2;
            err += p.3;
            if p.3 > parts[worst].3 {
                worst = i;
            }
        }
        let target = abs_tol.max(rel_tol * total.magnitude());
        if err <= target || parts.len() >= max_intervals {
            return Estimate { value: total, error: err };
        }
        let (lo, hi, _, _) = parts[worst];
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Estimate { value: total, error: err };
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        parts[worst] = (lo, mid, v1, e1);
        parts.push((mid, hi, v2, e2));
    }
}

/// Integral of `f` over `[-span, span]`, split at `0, ±scale, ±2 scale, ±4 scale, ...`
/// so that slowly decaying tails are resolved on geometrically growing pieces.
pub fn integrate_symmetric_range<F: FnMut(f64) -> f64>(
    mut f: F,
    span: f64,
    scale: f64,
    abs_tol: f64,
) -> Estimate<f64> {
    if span <= 0.0 {
        return Estimate { value: 0.0, error: 0.0 };
    }
    let mut breaks = alloc::vec![0.0];
    let mut b = scale.max(1e-12);
    while b < span {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(span);
    let pieces = 2 * (breaks.len() - 1);
    let tol = abs_tol / pieces as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for w in breaks.windows(2) {
        let right = integrate_with(&mut f, w[0], w[1], tol, 1e-14, 400);
        let left = integrate_with(&mut f, -w[1], -w[0], tol, 1e-14, 400);
        value += right.value + left.value;
        error += right.error + left.error;
    }
    Estimate { value, error }
}

/// Integral of `f` over `[start, end]` with breakpoints `start * 2^k`, for
/// integrands that decay on the scale of the distance from the origin.
pub fn integrate_ray<F: FnMut(f64) -> f64>(mut f: F, start: f64, end: f64, abs_tol: f64) -> Estimate<f64> {
    if end <= start {
        return Estimate { value: 0.0, error: 0.0 };
    }
    let mut breaks = alloc::vec![start];
    let mut b = 2.0 * start.max(1e-12);
    while b < end {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(end);
    let tol = abs_tol / (breaks.len() - 1) as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for w in breaks.windows(2) {
        let part = integrate_with(&mut f, w[0], w[1], tol, 1e-14, 400);
        value += part.value;
        error += part.error;
    }
    Estimate { value, error }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Neville evaluation at `target` of the polynomial interpolating `(xs, ys)`.
///
/// Returns the value and the magnitude of the last correction, which serves
/// as an error estimate for extrapolation.
pub fn neville<T: QuadValue>(xs: &[f64], ys: &[T], target: f64) -> (T, f64) {
    let n = xs.len();
    assert_eq!(n, ys.len());
    assert!(n > 0);
    let mut p: Vec<T> = ys.to_vec();
    let mut last = 0.0;
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            let num = (p[i + 1] * (target - xs[i])) - (p[i] * (target - xs[j]));
            let next = num * (1.0 / (xs[j] - xs[i]));
            if i == 0 {
                last = (next - p[0]).magnitude();
            }
            p[i] = next;
        }
    }
    (p[0], last)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let est = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-13);
        let exact = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
        assert!((est.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn symmetric_range_resolves_algebraic_tail() {
        // integral of (1 + s^2)^{-3/2} over the real line is 2
        let est = integrate_symmetric_range(|s| (1.0 + s * s).powf(-1.5), 1e6, 1.0, 1e-12);
        assert!((est.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn ray_integral_of_power_tail() {
        // integral of t^{-3} over [2, inf) is 1/8
        let est = integrate_ray(|t| t.powi(-3), 2.0, 1e8, 1e-14);
        assert!((est.value - 0.125).abs() < 1e-13);
    }

    #[test]
    fn neville_extrapolates_linear_error_model() {
        let xs = [1e-2, 1e-3, 1e-4];
        let ys: Vec<f64> = xs.iter().map(|e| 3.0 + 2.0 * e - 5.0 * e * e).collect();
        let (v, _) = neville(&xs, &ys, 0.0);
        assert!((v - 3.0).abs() < 1e-12);
    }
}
