//! Per-channel eigenvalues of the Aharonov–Bohm convolution kernel
//! `S_alpha(t) = cos(alpha pi) delta(t) + i sin(alpha pi)/pi p.v. e^{i[alpha]t} / (1 - e^{it})`.
use alloc::vec::Vec;
use core::f64::consts::PI;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate, neville};

/// Exclusion radii of the principal-value quadrature.
pub const PV_EXCLUSION_RADII: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Eigenvalues `lambda_k = 2 pi c_k` of a convolution kernel for `|k| <= N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpectrum {
    values: Vec<Complex64>,
}

impl ChannelSpectrum {
    /// `values[k + N]` for `k = -N..=N`; every value must be unimodular within 1e-6.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(crate::error::invalid("channel spectrum needs 2N+1 values"));
        }
        let n = (values.len() / 2) as i64;
        if let Some((i, z)) = values.iter().enumerate().find(|(_, z)| (z.norm() - 1.0).abs() > 1e-6) {
            return Err(Error::NotUnitary { k: i as i64 - n, modulus: z.norm() });
        }
        Ok(ChannelSpectrum { values })
    }

    pub fn cutoff(&self) -> usize {
        self.values.len() / 2
    }

    pub fn get(&self, k: i64) -> Option<Complex64> {
        let n = self.cutoff() as i64;
        if k.abs() > n {
            None
        } else {
            Some(self.values[(k + n) as usize])
        }
    }

    /// `(k, lambda_k)` for `k = -N..=N`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.cutoff() as i64;
        self.values.iter().enumerate().map(move |(i, z)| (i as i64 - n, *z))
    }

    /// `max_k |lambda_k - mu_k|` over the common channels.
    pub fn distance(&self, other: &ChannelSpectrum) -> f64 {
        self.iter().filter_map(|(k, z)| other.get(k).map(|w| (z - w).norm())).fold(0.0, f64::max)
    }
}

/// `e^{i alpha pi}` and `e^{-i alpha pi}` with exact values at integer `alpha`.
fn unit_pair(alpha: f64) -> (Complex64, Complex64) {
    let c = libm::cos(PI * alpha);
    let s = libm::sin(PI * alpha);
    if alpha == alpha.round() {
        let sign = if (alpha as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        return (Complex64::new(sign, 0.0), Complex64::new(sign, 0.0));
    }
    (Complex64::new(c, s), Complex64::new(c, -s))
}

/// Channel `k` in closed form: `e^{i alpha pi}` for `k >= [alpha]`,
/// `e^{-i alpha pi}` below.
pub fn ab_channel(alpha: f64, k: i64) -> Complex64 {
    let (up, down) = unit_pair(alpha);
    if k >= alpha.floor() as i64 {
        up
    } else {
        down
    }
}

/// Closed-form channel spectrum for `|k| <= n`.
pub fn ab_kernel_channels(alpha: f64, n: usize) -> ChannelSpectrum {
    let n = n.max(1) as i64;
    ChannelSpectrum { values: (-n..=n).map(|k| ab_channel(alpha, k)).collect() }
}

/// `p.v. int_0^{2 pi} e^{i j t} / (1 - e^{it}) dt` with the singularity at
/// `t = 0` excluded symmetrically by `eps`. Folding `t` and `2 pi - t` onto
/// `[eps, pi]` with `1/(1 - e^{it}) = 1/2 + (i/2) cot(t/2)` cancels the `1/t`
/// parts and leaves the real integrand `cos(jt) - sin(jt) cot(t/2)`.
pub fn pv_integral_excluded(j: i64, eps: f64) -> Complex64 {
    let j = j as f64;
    let f = |t: f64| (j * t).cos() - (j * t).sin() / (0.5 * t).tan();
    Complex64::new(integrate(f, eps, PI, 1e-14, 1e-14).value, 0.0)
}

/// Channel `k` from the distribution itself: the delta term contributes
/// `cos(alpha pi)`, the principal value is extrapolated to zero exclusion
/// radius from [`PV_EXCLUSION_RADII`]. Returns the value and the size of the
/// last extrapolation correction.
pub fn ab_channel_quadrature(alpha: f64, k: i64) -> (Complex64, f64) {
    let j = alpha.floor() as i64 - k;
    let ys: Vec<Complex64> = PV_EXCLUSION_RADII.iter().map(|&eps| pv_integral_excluded(j, eps)).collect();
    let (pv, correction) = neville(&PV_EXCLUSION_RADII, &ys, 0.0);
    let (c, s) = (libm::cos(PI * alpha), libm::sin(PI * alpha));
    (Complex64::new(c, 0.0) + Complex64::new(0.0, s / PI) * pv, correction)
}

/// Channel spectrum for `|k| <= n` by principal-value quadrature.
pub fn ab_kernel_channels_quadrature(alpha: f64, n: usize) -> ChannelSpectrum {
    let n = n.max(1) as i64;
    ChannelSpectrum { values: (-n..=n).map(|k| ab_channel_quadrature(alpha, k).0).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_flux_channels_are_signs() {
        for (alpha, v) in [(0.0, 1.0), (2.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            for (_, z) in ab_kernel_channels(alpha, 16).iter() {
                assert_eq!(z, Complex64::new(v, 0.0));
            }
        }
    }

    #[test]
    fn half_flux_splits_at_zero() {
        let s = ab_kernel_channels(0.5, 8);
        for (k, z) in s.iter() {
            let want = if k >= 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
            assert!((z - want).norm() < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for alpha in [0.5, 0.3, 1.7, -0.4] {
            for k in -6..=6 {
                let (q, corr) = ab_channel_quadrature(alpha, k);
                assert!((q - ab_channel(alpha, k)).norm() < 1e-9, "alpha {alpha} k {k}: {q} (corr {corr})");
            }
        }
    }

    #[test]
    fn non_unitary_spectra_are_rejected() {
        let bad = alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(ChannelSpectrum::new(bad), Err(Error::NotUnitary { k: 0, .. })));
    }
}
