use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{cross, dot, neg, norm, normalize, orthogonal_unit, sub, Vec3};
use crate::linalg::least_squares;

/// Quasi-uniform grid on S^2 from an icosahedron with a vertex at each pole,
/// refined by edge bisection. Every node's antipode is also a node, stored
/// as the exact negation.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    level: usize,
    nodes: Vec<Vec3>,
    antipode: Vec<usize>,
    faces: Vec<[usize; 3]>,
    neighbors: Vec<Vec<usize>>,
    node_faces: Vec<Vec<usize>>,
    weights: Vec<f64>,
}

impl SphereGrid {
    /// `10 * 4^level + 2` nodes.
    pub fn icosahedral(level: usize) -> Self {
        let (mut nodes, mut faces) = icosahedron();
        for _ in 0..level {
            let mut cache: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            let mut next = Vec::with_capacity(faces.len() * 4);
            for f in &faces {
                let mut mid = [0usize; 3];
                for e in 0..3 {
                    let (a, b) = (f[e], f[(e + 1) % 3]);
                    let key = (a.min(b), a.max(b));
                    mid[e] = *cache.entry(key).or_insert_with(|| {
                        let m = normalize(&[
                            nodes[a][0] + nodes[b][0],
                            nodes[a][1] + nodes[b][1],
                            nodes[a][2] + nodes[b][2],
                        ]);
                        nodes.push(m);
                        nodes.len() - 1
                    });
                }
                next.push([f[0], mid[0], mid[2]]);
                next.push([f[1], mid[1], mid[0]]);
                next.push([f[2], mid[2], mid[1]]);
                next.push([mid[0], mid[1], mid[2]]);
            }
            faces = next;
        }

        let n = nodes.len();
        let mut antipode = alloc::vec![usize::MAX; n];
        for i in 0..n {
            if antipode[i] != usize::MAX {
                continue;
            }
            let target = neg(&nodes[i]);
            let j = (0..n)
                .min_by(|&a, &b| {
                    norm(&sub(&nodes[a], &target))
                        .partial_cmp(&norm(&sub(&nodes[b], &target)))
                        .unwrap()
                })
                .unwrap();
            debug_assert!(norm(&sub(&nodes[j], &target)) < 1e-9);
            nodes[j] = target;
            antipode[i] = j;
            antipode[j] = i;
        }

        let mut neighbors = alloc::vec![Vec::new(); n];
        let mut node_faces = alloc::vec![Vec::new(); n];
        let mut weights = alloc::vec![0.0; n];
        for (fi, f) in faces.iter().enumerate() {
            let area = 0.5 * norm(&cross(&sub(&nodes[f[1]], &nodes[f[0]]), &sub(&nodes[f[2]], &nodes[f[0]])));
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                if !neighbors[a].contains(&b) {
                    neighbors[a].push(b);
                }
                if !neighbors[b].contains(&a) {
                    neighbors[b].push(a);
                }
                node_faces[f[e]].push(fi);
                weights[f[e]] += area / 3.0;
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        SphereGrid { level, nodes, antipode, faces, neighbors, node_faces, weights }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Vec3 {
        self.nodes[i]
    }

    /// Index of the node at `-node(i)`.
    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Area weights (summing to 1) for grid quadrature.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Mean spacing between neighbouring nodes, in radians.
    pub fn spacing(&self) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for (i, nb) in self.neighbors.iter().enumerate() {
            for &j in nb {
                sum += dot(&self.nodes[i], &self.nodes[j]).clamp(-1.0, 1.0).acos();
                count += 1;
            }
        }
        sum / count as f64
    }

    pub fn nearest(&self, omega: &Vec3) -> usize {
        let mut best = 0;
        let mut best_dot = f64::NEG_INFINITY;
        for (i, v) in self.nodes.iter().enumerate() {
            let d = dot(v, omega);
            if d > best_dot {
                best_dot = d;
                best = i;
            }
        }
        best
    }

    /// Whether two grids have identical nodes.
    pub fn same_nodes(&self, other: &SphereGrid) -> bool {
        core::ptr::eq(self, other) || self.nodes == other.nodes
    }

    /// Node index whose coordinates equal `omega` to within 1e-13.
    pub fn find_node(&self, omega: &Vec3) -> Option<usize> {
        let i = self.nearest(omega);
        (norm(&sub(&self.nodes[i], omega)) < 1e-13).then_some(i)
    }

    fn barycentric(&self, face: &[usize; 3], omega: &Vec3) -> Option<[f64; 3]> {
        let [a, b, c] = face.map(|i| self.nodes[i]);
        let wa = dot(omega, &cross(&b, &c));
        let wb = dot(&a, &cross(omega, &c));
        let wc = dot(&a, &cross(&b, omega));
        let sum = wa + wb + wc;
        if sum == 0.0 {
            return None;
        }
        let w = [wa / sum, wb / sum, wc / sum];
        let eps = -1e-12;
        (w.iter().all(|&x| x >= eps) && sum * dot(omega, &a) > 0.0).then_some(w)
    }

    fn locate(&self, omega: &Vec3) -> ([usize; 3], [f64; 3]) {
        let near = self.nearest(omega);
        for &fi in &self.node_faces[near] {
            if let Some(w) = self.barycentric(&self.faces[fi], omega) {
                return (self.faces[fi], w);
            }
        }
        for f in &self.faces {
            if let Some(w) = self.barycentric(f, omega) {
                return (*f, w);
            }
        }
        ([near, near, near], [1.0, 0.0, 0.0])
    }

    fn stencil(&self, center: usize) -> Vec<usize> {
        let mut out = alloc::vec![center];
        for &j in &self.neighbors[center] {
            if !out.contains(&j) {
                out.push(j);
            }
        }
        let first_ring = out.clone();
        for &j in &first_ring[1..] {
            for &k in &self.neighbors[j] {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        out
    }
}

fn icosahedron() -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let z = 1.0 / 5.0f64.sqrt();
    let r = 2.0 * z;
    let mut nodes = alloc::vec![[0.0, 0.0, 1.0]];
    for k in 0..5 {
        let t = TAU * k as f64 / 5.0;
        nodes.push([r * t.cos(), r * t.sin(), z]);
    }
    for k in 0..5 {
        let t = TAU * k as f64 / 5.0 + TAU / 10.0;
        nodes.push([r * t.cos(), r * t.sin(), -z]);
    }
    nodes.push([0.0, 0.0, -1.0]);
    let up = |k: usize| 1 + k % 5;
    let lo = |k: usize| 6 + k % 5;
    let mut faces = Vec::new();
    for k in 0..5 {
        faces.push([0, up(k), up(k + 1)]);
        faces.push([up(k), lo(k), up(k + 1)]);
        faces.push([up(k + 1), lo(k), lo(k + 1)]);
        faces.push([11, lo(k + 1), lo(k)]);
    }
    (nodes, faces)
}

/// Interpolation scheme used to evaluate a [`SphereFunction`] between nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interpolation {
    /// Barycentric on the grid triangle containing the point.
    Linear,
    /// Local least-squares cubic in tangent-plane coordinates on the two-ring
    /// stencil of the nearest node.
    Cubic,
}

/// Real samples on a [`SphereGrid`].
#[derive(Clone, Debug)]
pub struct SphereFunction {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
    interpolation: Interpolation,
}

impl PartialEq for SphereFunction {
    fn eq(&self, other: &Self) -> bool {
        self.grid.same_nodes(&other.grid) && self.values == other.values && self.interpolation == other.interpolation
    }
}

impl SphereFunction {
    pub fn from_values(grid: Arc<SphereGrid>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch {
                reason: alloc::format!("{} samples for a grid of {} nodes", values.len(), grid.len()),
            });
        }
        Ok(SphereFunction { grid, values, interpolation })
    }

    pub fn from_fn<F: FnMut(&Vec3) -> f64>(grid: Arc<SphereGrid>, interpolation: Interpolation, mut f: F) -> Self {
        let values = grid.nodes().iter().map(&mut f).collect();
        SphereFunction { grid, values, interpolation }
    }

    pub fn zero(grid: Arc<SphereGrid>) -> Self {
        let values = alloc::vec![0.0; grid.len()];
        SphereFunction { grid, values, interpolation: Interpolation::Cubic }
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn value_at(&self, node: usize) -> f64 {
        self.values[node]
    }

    /// Area-weighted grid mean.
    pub fn mean(&self) -> f64 {
        self.values.iter().zip(self.grid.weights()).map(|(v, w)| v * w).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Value at the unit vector `omega` (exact at nodes).
    pub fn eval(&self, omega: &Vec3) -> f64 {
        let w = normalize(omega);
        if let Some(i) = self.grid.find_node(&w) {
            return self.values[i];
        }
        match self.interpolation {
            Interpolation::Linear => {
                let (f, b) = self.grid.locate(&w);
                b[0] * self.values[f[0]] + b[1] * self.values[f[1]] + b[2] * self.values[f[2]]
            }
            Interpolation::Cubic => self.cubic_fit(&w).map(|c| c.0[0]).unwrap_or_else(|| {
                let (f, b) = self.grid.locate(&w);
                b[0] * self.values[f[0]] + b[1] * self.values[f[1]] + b[2] * self.values[f[2]]
            }),
        }
    }

    fn cubic_fit(&self, w: &Vec3) -> Option<([f64; 3], Vec3, Vec3)> {
        let center = self.grid.nearest(w);
        let e1 = orthogonal_unit(w);
        let e2 = cross(w, &e1);
        let mut rows = Vec::new();
        let mut ys = Vec::new();
        for j in self.grid.stencil(center) {
            let p = self.grid.node(j);
            let c = dot(&p, w);
            if c <= 0.2 {
                continue;
            }
            let u = dot(&p, &e1);
            let v = dot(&p, &e2);
            rows.push(alloc::vec![1.0, u, v, u * u, u * v, v * v, u * u * u, u * u * v, u * v * v, v * v * v]);
            ys.push(self.values[j]);
        }
        if rows.len() < 12 {
            return None;
        }
        let c = least_squares(&rows, &ys)?;
        Some(([c[0], c[1], c[2]], e1, e2))
    }

    /// Tangential gradient at `omega` from the local cubic fit.
    pub fn tangential_gradient(&self, omega: &Vec3) -> Vec3 {
        let w = normalize(omega);
        match self.cubic_fit(&w) {
            Some((c, e1, e2)) => [
                c[1] * e1[0] + c[2] * e2[0],
                c[1] * e1[1] + c[2] * e2[1],
                c[1] * e1[2] + c[2] * e2[2],
            ],
            None => [0.0; 3],
        }
    }

    /// `f(omega) - f(-omega)`; exact (and exactly antisymmetric) at nodes.
    pub fn antipodal_difference(&self, omega: &Vec3) -> f64 {
        let w = normalize(omega);
        if let Some(i) = self.grid.find_node(&w) {
            return self.values[i] - self.values[self.grid.antipode(i)];
        }
        self.eval(&w) - self.eval(&neg(&w))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.grid.same_nodes(&other.grid) {
            return Err(Error::GridMismatch { reason: "sphere functions on different grids".into() });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(SphereFunction { grid: self.grid.clone(), values, interpolation: self.interpolation })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, s: f64) -> Self {
        SphereFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| s * v).collect(),
            interpolation: self.interpolation,
        }
    }

    /// Copy with the grid mean removed.
    pub fn zero_mean(&self) -> Self {
        let m = self.mean();
        SphereFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v - m).collect(),
            interpolation: self.interpolation,
        }
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::scale;

    #[test]
    fn node_counts_and_antipodes() {
        for level in 0..4 {
            let g = SphereGrid::icosahedral(level);
            assert_eq!(g.len(), 10 * 4usize.pow(level as u32) + 2);
            for i in 0..g.len() {
                let j = g.antipode(i);
                assert_eq!(g.node(j), neg(&g.node(i)));
                assert_eq!(g.antipode(j), i);
                assert!((norm(&g.node(i)) - 1.0).abs() < 1e-15);
            }
            let wsum: f64 = g.weights().iter().sum();
            assert!((wsum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn poles_are_nodes() {
        let g = SphereGrid::icosahedral(2);
        assert!(g.find_node(&[0.0, 0.0, 1.0]).is_some());
        assert!(g.find_node(&[0.0, 0.0, -1.0]).is_some());
    }

    #[test]
    fn odd_cubic_antipodal_difference() {
        let grid = Arc::new(SphereGrid::icosahedral(4));
        for interp in [Interpolation::Linear, Interpolation::Cubic] {
            let f = SphereFunction::from_fn(grid.clone(), interp, |w| w[0] * w[1] * w[2]);
            for i in 0..grid.len() {
                let w = grid.node(i);
                assert_eq!(f.antipodal_difference(&w), -f.antipodal_difference(&neg(&w)));
                assert!((f.antipodal_difference(&w) - 2.0 * w[0] * w[1] * w[2]).abs() < 1e-15);
            }
            // off-grid points carry interpolation error only
            let tol = match interp {
                Interpolation::Linear => 5e-3,
                Interpolation::Cubic => 5e-4,
            };
            for k in 0..50 {
                let (a, b) = crate::sampling::weyl2(k);
                let z = 2.0 * a - 1.0;
                let t = TAU * b;
                let r = (1.0 - z * z).sqrt();
                let w = [r * t.cos(), r * t.sin(), z];
                let d = f.antipodal_difference(&w);
                assert!((d - 2.0 * w[0] * w[1] * w[2]).abs() < tol, "{interp:?} {d}");
            }
        }
    }

    #[test]
    fn quadratic_gradient_of_linear_function() {
        let grid = Arc::new(SphereGrid::icosahedral(3));
        let f = SphereFunction::from_fn(grid, Interpolation::Cubic, |w| w[2]);
        let w = normalize(&[0.3, 0.4, 0.5]);
        let g = f.tangential_gradient(&w);
        // gradient of z on the sphere: e_z - (e_z . w) w
        let exact = sub(&[0.0, 0.0, 1.0], &scale(w[2], &w));
        assert!(norm(&sub(&g, &exact)) < 5e-3);
    }
}
