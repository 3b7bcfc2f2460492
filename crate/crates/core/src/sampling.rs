//! Deterministic low-discrepancy sequences used where an algorithm needs
//! "random-looking" probe points without carrying an RNG.

use alloc::vec::Vec;
use core::f64::consts::TAU;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use crate::geom::{Dim, Vec3};

const PHI1: f64 = 0.618_033_988_749_894_8;
// plastic-number based R2 sequence
const R2_A: f64 = 0.754_877_666_246_692_7;
const R2_B: f64 = 0.569_840_290_998_053_2;

/// i-th point of the golden-ratio sequence in [0, 1).
pub fn weyl1(i: usize) -> f64 {
    let v = 0.5 + PHI1 * i as f64;
    v - libm::floor(v)
}

/// i-th point of the R2 sequence in [0, 1)^2.
pub fn weyl2(i: usize) -> (f64, f64) {
    let a = 0.5 + R2_A * i as f64;
    let b = 0.5 + R2_B * i as f64;
    (a - libm::floor(a), b - libm::floor(b))
}

/// Quasi-random points with `r_min <= |x| <= r_max`, log-uniform in radius,
/// uniform in direction.
pub fn shell_points(dim: Dim, r_min: f64, r_max: f64, count: usize) -> Vec<Vec3> {
    (0..count)
        .map(|i| {
            let (a, b) = weyl2(i);
            let r = r_min * (r_max / r_min).powf(weyl1(i + 7));
            match dim {
                Dim::Two => [r * (TAU * a).cos(), r * (TAU * a).sin(), 0.0],
                Dim::Three => {
                    let z = 2.0 * b - 1.0;
                    let s = (1.0 - z * z).sqrt();
                    [r * s * (TAU * a).cos(), r * s * (TAU * a).sin(), r * z]
                }
            }
        })
        .collect()
}
