//! Restriction of two-forms to planes and antipodal defects on the sphere.
// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::line::Plane;
use crate::angular::SphereFunction;
use crate::error::{Error, Result};
use crate::fields::{curl_at, GridField, TwoForm, VectorSource};
use crate::geom::Dim;

/// Samples `B(e1, e2)` at the nodes `p + u e1 + v e2` of an `n x n` grid with
/// `|u|, |v| <= half_width`, returned in plane coordinates `(u, v)`.
pub fn plane_restrict<B: Fn(&crate::geom::Vec3) -> TwoForm>(
    b: B,
    plane: &Plane,
    obstacle_radius: f64,
    n: usize,
    half_width: f64,
) -> Result<GridField> {
    let d = plane.distance_to_origin();
    if d <= obstacle_radius {
        return Err(Error::PlaneHitsObstacle { distance: d, obstacle: obstacle_radius });
    }
    let h = 2.0 * half_width / (n.max(2) - 1) as f64;
    let (e1, e2) = (plane.e1(), plane.e2());
    GridField::from_fn(2, [-half_width, -half_width, 0.0], [h, h, 1.0], [n.max(2), n.max(2), 1], 1, |x| {
        alloc::vec![b(&plane.point(x[0], x[1])).apply(&e1, &e2)]
    })
}

/// [`plane_restrict`] of `dA` computed by finite differences.
pub fn plane_restrict_curl<A: VectorSource>(
    a: &A,
    plane: &Plane,
    obstacle_radius: f64,
    n: usize,
    half_width: f64,
    rel_step: f64,
) -> Result<GridField> {
    plane_restrict(|x| curl_at(a, x, Dim::Three, rel_step), plane, obstacle_radius, n, half_width)
}

/// Antipodal behaviour of a sphere function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntipodalDefect {
    /// `max |phi(w) - phi(-w)|` over the grid.
    pub max_defect: f64,
    /// Weighted mean of `phi(w) - phi(-w)`; odd in `w`, hence zero.
    pub constant: f64,
    /// Whether `constant` vanishes to rounding.
    pub constant_vanishes: bool,
}

/// `phi(w) - phi(-w)` on the grid: its maximum, and its mean, which a
/// constant `2 pi m` would have to equal and which antisymmetry forces to 0.
pub fn antipodal_defect(phi: &SphereFunction) -> AntipodalDefect {
    let grid = phi.grid();
    let v = phi.values();
    let mut max_defect: f64 = 0.0;
    let mut constant = 0.0;
    for (i, w) in grid.weights().iter().enumerate() {
        let d = v[i] - v[grid.antipode(i)];
        max_defect = max_defect.max(d.abs());
        constant += w * d;
    }
    constant /= grid.weights().iter().sum::<f64>();
    let scale = phi.max_abs().max(1.0);
    AntipodalDefect { max_defect, constant, constant_vanishes: constant.abs() <= 1e-12 * scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{Interpolation, SphereGrid};
    use alloc::sync::Arc;

    #[test]
    fn even_and_odd_defects() {
        let grid = Arc::new(SphereGrid::icosahedral(3));
        let even = SphereFunction::from_fn(grid.clone(), Interpolation::Cubic, |w| w[0] * w[1] + w[2] * w[2]);
        assert_eq!(antipodal_defect(&even).max_defect, 0.0);
        let odd = SphereFunction::from_fn(grid.clone(), Interpolation::Cubic, |w| w[2]);
        let d = antipodal_defect(&odd);
        assert!((d.max_defect - 2.0).abs() < 1e-12);
        assert!(d.constant_vanishes);
    }

    #[test]
    fn constant_form_restricts_to_one() {
        let plane = Plane::with_normal([0.0, 0.0, 1.0], 2.0).unwrap();
        let b = plane_restrict(|_| TwoForm([0.0, 0.0, 1.0]), &plane, 1.0, 5, 1.0).unwrap();
        assert!(b.data().iter().all(|v| (v - 1.0).abs() < 1e-15));
        let low = Plane::with_normal([0.0, 0.0, 1.0], 0.5).unwrap();
        assert!(matches!(plane_restrict(|_| TwoForm::default(), &low, 1.0, 5, 1.0), Err(Error::PlaneHitsObstacle { .. })));
    }
}
