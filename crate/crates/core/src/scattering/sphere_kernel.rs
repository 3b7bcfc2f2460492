//! Scattering kernels on the sphere of directions (`n = 3`).
use alloc::sync::Arc;
use alloc::vec::Vec;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::angular::{SphereFunction, SphereGrid};
use crate::error::{Error, Result};
use crate::fields::{GaugeElement, Phase};
use crate::geom::{dot, norm, sub, Dim, Vec3};

/// Kernel sampled on the nodes of a sphere grid,
/// `S(w_i, w_j) = e^{i psi(w_i)} B_ij e^{-i psi(-w_j)}`.
///
/// `B` is the gauge-free part; `psi` collects the prefactor phases. Whether
/// the kernel carries a singular support on the diagonal (the `curl A0 != 0`
/// hypothesis) cannot be read off sampled data and is declared by the caller.
#[derive(Clone, Debug)]
pub struct SphereKernel {
    energy: f64,
    grid: Arc<SphereGrid>,
    phase: Vec<f64>,
    base: Vec<Complex64>,
    singular_support: bool,
}

impl PartialEq for SphereKernel {
    fn eq(&self, other: &Self) -> bool {
        self.energy == other.energy
            && self.grid.same_nodes(&other.grid)
            && self.phase == other.phase
            && self.base == other.base
            && self.singular_support == other.singular_support
    }
}

impl SphereKernel {
    /// Builds a kernel from an explicit base matrix (row-major, `N x N`).
    pub fn new(
        grid: Arc<SphereGrid>,
        phase: Vec<f64>,
        base: Vec<Complex64>,
        energy: f64,
        singular_support: bool,
    ) -> Result<Self> {
        let n = grid.len();
        if phase.len() != n || base.len() != n * n {
            return Err(Error::GridMismatch {
                reason: alloc::format!("{n} nodes but {} phases and {} kernel values", phase.len(), base.len()),
            });
        }
        if !(energy > 0.0) {
            return Err(crate::error::invalid("kernel needs a positive energy"));
        }
        Ok(SphereKernel { energy, grid, phase, base, singular_support })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn base(&self) -> &[Complex64] {
        &self.base
    }

    pub fn singular_support(&self) -> bool {
        self.singular_support
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Kernel value at nodes `(i, j)`.
    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        let n = self.len();
        let a = self.grid.antipode(j);
        Complex64::from_polar(1.0, self.phase[i] - self.phase[a]) * self.base[i * n + j]
    }

    /// Largest `|S|` on the grid.
    pub fn max_abs(&self) -> f64 {
        self.base.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Model kernel of a potential whose transversal part is
/// `swirl x x / |x|^2 + grad psi`: identity plus an off-diagonal part of
/// strength `|swirl|` decaying like `(h / |w - w'|)^2` on the grid scale `h`,
/// with prefactor phase `psi`.
pub fn assemble_sphere_kernel(swirl: &Vec3, psi: &SphereFunction, energy: f64, singular_support: bool) -> Result<SphereKernel> {
    let grid = psi.grid().clone();
    let n = grid.len();
    let kappa = norm(swirl);
    let h = grid.spacing();
    let mut base = alloc::vec![Complex64::default(); n * n];
    for i in 0..n {
        let wi = grid.node(i);
        for j in 0..n {
            base[i * n + j] = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                let d = sub(&wi, &grid.node(j));
                Complex64::new(0.0, kappa * h * h / dot(&d, &d))
            };
        }
    }
    SphereKernel::new(grid, psi.values().to_vec(), base, energy, singular_support)
}

/// `e^{i phi(w)} S e^{-i phi(-w')}`: adds `phi` to the prefactor phase.
pub fn apply_gauge_to_sphere_kernel(kernel: &SphereKernel, g: &GaugeElement) -> Result<SphereKernel> {
    if g.dim() != Dim::Three {
        return Err(Error::DimensionMismatch { expected: 3, found: g.dim().n() });
    }
    if g.m != 0 {
        return Err(crate::error::invalid("gauges in space carry no winding"));
    }
    if g.phase.is_zero() {
        return Ok(kernel.clone());
    }
    let Phase::Sphere(phi) = &g.phase else {
        return Err(Error::DimensionMismatch { expected: 3, found: 2 });
    };
    let same = phi.grid().same_nodes(&kernel.grid);
    let phase = kernel
        .phase
        .iter()
        .enumerate()
        .map(|(i, p)| p + if same { phi.value_at(i) } else { phi.eval(&kernel.grid.node(i)) })
        .collect();
    Ok(SphereKernel { phase, ..kernel.clone() })
}

/// Largest difference of two sphere kernels and the node pair where it occurs.
pub fn sphere_kernel_distance_at(s1: &SphereKernel, s2: &SphereKernel) -> Result<(f64, usize, usize)> {
    if !s1.grid.same_nodes(&s2.grid) {
        return Err(Error::GridMismatch { reason: "kernels live on different sphere grids".into() });
    }
    if s1.energy != s2.energy {
        return Err(Error::GridMismatch { reason: alloc::format!("energies {} and {}", s1.energy, s2.energy) });
    }
    let n = s1.len();
    let mut worst = (0.0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let d = (s1.value(i, j) - s2.value(i, j)).norm();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    Ok(worst)
}

pub fn sphere_kernel_distance(s1: &SphereKernel, s2: &SphereKernel) -> Result<f64> {
    sphere_kernel_distance_at(s1, s2).map(|d| d.0)
}
