//! Recovery of the gauge relating two scattering kernels from their
//! singular behaviour at the diagonal.
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use super::kernel::{apply_gauge_to_kernel, kernel_distance_parts, ScatteringKernel, COMPARED_CHANNELS};
use super::sphere_kernel::{apply_gauge_to_sphere_kernel, sphere_kernel_distance_at, SphereKernel};
use crate::angular::{wrap_phase, AngularFunction, Interpolation, SphereFunction};
use crate::error::{Error, Result};
use crate::fields::GaugeElement;
use crate::linalg::conjugate_gradient;
use crate::tolerances::Tolerances;
use crate::tomography::{antipodal_defect, AntipodalDefect};

/// Fraction of the principal-value magnitude the kernel must reach next to
/// the diagonal for the ratio of kernels to be read off there.
pub const DOMINANCE_MARGIN: f64 = 0.5;
/// Diagonal offsets used to fit the planar phase.
pub const FIT_OFFSETS: [i64; 6] = [-3, -2, -1, 1, 2, 3];

/// Evidence that two kernels are not gauge related.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// The flux invariant `lambda_N conj(lambda_{-N}) = e^{2 pi i alpha}` differs.
    Channel { k: i64, first: Complex64, second: Complex64 },
    /// Planar kernels differ at `(theta, theta')` after the best gauge.
    Grid { theta: f64, theta_prime: f64, difference: f64 },
    /// Sphere kernels differ at the node pair after the best gauge.
    Sphere { omega: crate::geom::Vec3, omega_prime: crate::geom::Vec3, difference: f64 },
}

/// Verdict of the gauge-equivalence solver.
#[derive(Clone, Debug)]
pub enum SolverOutcome {
    /// `S2 = g S1 g^{-1}` with the recovered `g` (no short-range part).
    Equivalent {
        gauge: GaugeElement,
        /// Kernel distance after applying `g`.
        residual: f64,
        /// In space, the antipodal behaviour of the recovered phase.
        antipodal: Option<AntipodalDefect>,
    },
    NotEquivalent { witness: Witness },
    /// The data cannot single out a gauge.
    Ambiguous { reason: String },
}

impl SolverOutcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, SolverOutcome::Equivalent { .. })
    }

    pub fn gauge(&self) -> Option<&GaugeElement> {
        match self {
            SolverOutcome::Equivalent { gauge, .. } => Some(gauge),
            _ => None,
        }
    }
}

fn flux_invariant(k: &ScatteringKernel, n: i64) -> Complex64 {
    k.channel(n) * k.channel(-n).conj()
}

/// Planar solver.
///
/// The ratio `S2/S1` next to the diagonal is
/// `(-1)^m e^{i m (theta - theta')} e^{i phi(theta) - i phi(theta' + pi)}`
/// wherever the principal-value part of `S1` dominates. The integer `m` is
/// read from its winding along the diagonal, `phi` from the Fourier modes of
/// its phase at offsets `+-1, +-2, +-3` grid cells, and the fitted gauge is
/// accepted only if it reproduces `S2` globally.
///
/// Integer flux has no principal-value part to anchor the phases, so the
/// answer is [`SolverOutcome::Ambiguous`].
pub fn gauge_equivalence_solver(s1: &ScatteringKernel, s2: &ScatteringKernel, tol: &Tolerances) -> Result<SolverOutcome> {
    let m_size = s1.grid_size();
    if m_size != s2.grid_size() || s1.energy() != s2.energy() {
        return Err(Error::GridMismatch {
            reason: alloc::format!(
                "grids {} / {} at energies {} / {}",
                m_size,
                s2.grid_size(),
                s1.energy(),
                s2.energy()
            ),
        });
    }
    if s1.is_integer_flux() {
        return Ok(SolverOutcome::Ambiguous {
            reason: "integer flux: no principal-value singularity to anchor the gauge".into(),
        });
    }
    let n = COMPARED_CHANNELS as i64 + s1.winding().abs() + s2.winding().abs();
    let (first, second) = (flux_invariant(s1, n), flux_invariant(s2, n));
    if (first - second).norm() > tol.kernel {
        return Ok(SolverOutcome::NotEquivalent { witness: Witness::Channel { k: n, first, second } });
    }

    let a = s1.grid_values();
    let b = s2.grid_values();
    let at = |i: usize, d: i64| -> usize { i * m_size + (i as i64 + d).rem_euclid(m_size as i64) as usize };
    let eta = TAU / m_size as f64;
    let floor = DOMINANCE_MARGIN * s1.singular_strength().abs() / (2.0 * (0.5 * eta).sin());
    for i in 0..m_size {
        for d in [-1, 1] {
            let v = a[at(i, d)].norm();
            if v < floor {
                return Err(Error::SingularPartMissing {
                    reason: alloc::format!("|S1| = {v:.3e} next to the diagonal, below {floor:.3e}"),
                });
            }
        }
    }
    let ratio = |i: usize, d: i64| b[at(i, d)] / a[at(i, d)];

    // the ratio must be unimodular wherever it is used
    for i in 0..m_size {
        for d in FIT_OFFSETS {
            let r = ratio(i, d);
            if (r.norm() - 1.0).abs() > tol.phase_fit {
                let j = at(i, d) % m_size;
                return Ok(SolverOutcome::NotEquivalent {
                    witness: Witness::Grid {
                        theta: s1.theta(i),
                        theta_prime: s1.theta(j),
                        difference: (b[at(i, d)] - a[at(i, d)]).norm(),
                    },
                });
            }
        }
    }

    let mean_turn = (0..m_size).map(|i| (ratio(i, -1) * ratio(i, 1).conj()).arg()).sum::<f64>() / m_size as f64;
    let m = (mean_turn / (2.0 * eta)).round() as i64;

    // psi_d(theta) = phi(theta) - phi(theta + pi + d eta), Fourier mode k
    // equal to c_k (1 - (-1)^k e^{i k d eta})
    let order = m_size / 2 - 1;
    let mut num = alloc::vec![Complex64::default(); order + 1];
    let mut den = alloc::vec![0.0; order + 1];
    for d in FIT_OFFSETS {
        let shift = Complex64::from_polar(1.0, m as f64 * (d as f64 * eta - PI));
        let mut psi: Vec<f64> = (0..m_size).map(|i| (ratio(i, d) * shift).arg()).collect();
        unwrap(&mut psi);
        let mean = psi.iter().sum::<f64>() / m_size as f64;
        for p in &mut psi {
            *p -= mean;
        }
        for k in 1..=order {
            let mut acc = Complex64::default();
            for (i, p) in psi.iter().enumerate() {
                let idx = (k * i) % m_size;
                acc += Complex64::from_polar(*p, -eta * idx as f64);
            }
            acc /= m_size as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let coef = Complex64::new(1.0, 0.0) - Complex64::from_polar(sign, k as f64 * d as f64 * eta);
            num[k] += coef.conj() * acc;
            den[k] += coef.norm_sqr();
        }
    }
    let mut triples = Vec::with_capacity(2 * order);
    for k in 1..=order {
        let c = num[k] / den[k];
        triples.push((k as i64, c.re, c.im));
        triples.push((-(k as i64), c.re, -c.im));
    }
    let phi = AngularFunction::from_triples(order, &triples)?;
    let gauge = GaugeElement::planar(m, phi, tol.mean)?;

    let moved = apply_gauge_to_kernel(s1, &gauge)?;
    let dist = kernel_distance_parts(&moved, s2)?;
    if dist.total() >= tol.kernel {
        let witness = if dist.channels > dist.grid {
            Witness::Channel { k: dist.channel, first: moved.channel(dist.channel), second: s2.channel(dist.channel) }
        } else {
            Witness::Grid { theta: dist.at.0, theta_prime: dist.at.1, difference: dist.grid }
        };
        return Ok(SolverOutcome::NotEquivalent { witness });
    }
    Ok(SolverOutcome::Equivalent { gauge, residual: dist.total(), antipodal: None })
}

fn unwrap(v: &mut [f64]) {
    for i in 1..v.len() {
        v[i] = v[i - 1] + wrap_phase(v[i] - v[i - 1]);
    }
}

/// Solver on the sphere.
///
/// On the near-diagonal set the ratio `S2/S1` is `e^{i(phi(w) - phi(-w'))}`,
/// so `R(w_i, w_i) conj R(w_k, w_i) = e^{i(phi_i - phi_k)}` for neighbouring
/// nodes. These local differences are integrated by a least-squares graph
/// Laplacian solve with zero weighted mean. The diagonal singular support
/// must be declared on `s1`; without it the answer is an error.
pub fn gauge_equivalence_solver_sphere(s1: &SphereKernel, s2: &SphereKernel, tol: &Tolerances) -> Result<SolverOutcome> {
    if !s1.grid().same_nodes(s2.grid()) || s1.energy() != s2.energy() {
        return Err(Error::GridMismatch { reason: "kernels live on different grids or energies".into() });
    }
    if !s1.singular_support() {
        return Err(Error::SingularPartMissing { reason: "no singular support declared for the first kernel".into() });
    }
    let grid = s1.grid().clone();
    let n = grid.len();
    let scale = s1.max_abs().max(1.0);
    let ratio = |i: usize, j: usize| -> Result<Complex64> {
        let v = s1.value(i, j);
        if v.norm() < DOMINANCE_MARGIN * 1e-6 * scale {
            return Err(Error::SingularPartMissing { reason: alloc::format!("vanishing kernel at nodes ({i}, {j})") });
        }
        Ok(s2.value(i, j) / v)
    };

    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..n {
        let rii = ratio(i, i)?;
        for &k in grid.neighbors(i) {
            if k < i {
                continue;
            }
            let z = rii * ratio(k, i)?.conj();
            if (z.norm() - 1.0).abs() > tol.phase_fit {
                return Ok(SolverOutcome::NotEquivalent {
                    witness: Witness::Sphere {
                        omega: grid.node(k),
                        omega_prime: grid.node(i),
                        difference: (s2.value(k, i) - s1.value(k, i)).norm(),
                    },
                });
            }
            edges.push((i, k, z.arg()));
        }
    }

    // minimise sum (phi_i - phi_k - delta_ik)^2 under a zero-sum constraint,
    // which the pinned mean projection enforces
    let mut rhs = alloc::vec![0.0; n];
    for &(i, k, d) in &edges {
        rhs[i] += d;
        rhs[k] -= d;
    }
    let laplacian = |x: &[f64], y: &mut [f64]| {
        y.iter_mut().for_each(|v| *v = 0.0);
        for &(i, k, _) in &edges {
            let t = x[i] - x[k];
            y[i] += t;
            y[k] -= t;
        }
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        y.iter_mut().for_each(|v| *v += mean);
    };
    let values = conjugate_gradient(laplacian, &rhs, 1e-14, 20 * n);
    let weights = grid.weights();
    let mean = values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / weights.iter().sum::<f64>();
    let values: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let phi = SphereFunction::from_values(grid.clone(), values, Interpolation::Cubic)?;
    let antipodal = antipodal_defect(&phi);
    let gauge = GaugeElement::spatial(phi, tol.mean)?;

    let moved = apply_gauge_to_sphere_kernel(s1, &gauge)?;
    let (dist, i, j) = sphere_kernel_distance_at(&moved, s2)?;
    if dist >= tol.kernel {
        return Ok(SolverOutcome::NotEquivalent {
            witness: Witness::Sphere { omega: grid.node(i), omega_prime: grid.node(j), difference: dist },
        });
    }
    Ok(SolverOutcome::Equivalent { gauge, residual: dist, antipodal: Some(antipodal) })
}
