//! Regular-grid samples of scalar or vector fields.
use alloc::vec::Vec;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Samples on a regular 2D or 3D node grid, `components` values per node,
/// evaluated by multilinear interpolation. Outside the grid the field is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    dim: usize,
    lower: Vec3,
    spacing: Vec3,
    shape: [usize; 3],
    components: usize,
    // node-major, x fastest: ((k * ny + j) * nx + i) * components + c
    data: Vec<f64>,
}

impl GridField {
    pub fn new(
        dim: usize,
        lower: Vec3,
        spacing: Vec3,
        shape: [usize; 3],
        components: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::DimensionMismatch { expected: 2, found: dim });
        }
        let mut shape = shape;
        if dim == 2 {
            shape[2] = 1;
        }
        if shape[..dim].iter().any(|&n| n < 2) || spacing[..dim].iter().any(|&h| !(h > 0.0)) {
            return Err(crate::error::invalid("grid needs at least two nodes and a positive spacing per axis"));
        }
        let nodes = shape[0] * shape[1] * shape[2];
        if components == 0 || data.len() != nodes * components {
            return Err(Error::GridMismatch {
                reason: alloc::format!("{} values for {} nodes x {} components", data.len(), nodes, components),
            });
        }
        Ok(GridField { dim, lower, spacing, shape, components, data })
    }

    /// Samples `f` at the nodes of the grid.
    pub fn from_fn<F: FnMut(&Vec3) -> Vec<f64>>(
        dim: usize,
        lower: Vec3,
        spacing: Vec3,
        shape: [usize; 3],
        components: usize,
        mut f: F,
    ) -> Result<Self> {
        let mut shape = shape;
        if dim == 2 {
            shape[2] = 1;
        }
        let mut data = Vec::with_capacity(shape[0] * shape[1] * shape[2] * components);
        for k in 0..shape[2] {
            for j in 0..shape[1] {
                for i in 0..shape[0] {
                    let x = [
                        lower[0] + i as f64 * spacing[0],
                        lower[1] + j as f64 * spacing[1],
                        if dim == 3 { lower[2] + k as f64 * spacing[2] } else { 0.0 },
                    ];
                    let v = f(&x);
                    data.extend((0..components).map(|c| v.get(c).copied().unwrap_or(0.0)));
                }
            }
        }
        GridField::new(dim, lower, spacing, shape, components, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> Vec3 {
        self.lower
    }

    pub fn spacing(&self) -> Vec3 {
        self.spacing
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> Vec3 {
        [
            self.lower[0] + i as f64 * self.spacing[0],
            self.lower[1] + j as f64 * self.spacing[1],
            if self.dim == 3 { self.lower[2] + k as f64 * self.spacing[2] } else { 0.0 },
        ]
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> &[f64] {
        let n = ((k * self.shape[1] + j) * self.shape[0] + i) * self.components;
        &self.data[n..n + self.components]
    }

    /// Iterator over `(node position, values)`.
    pub fn samples(&self) -> impl Iterator<Item = (Vec3, &[f64])> + '_ {
        let [nx, ny, _] = self.shape;
        self.data.chunks(self.components).enumerate().map(move |(n, v)| {
            let i = n % nx;
            let j = (n / nx) % ny;
            let k = n / (nx * ny);
            (self.node(i, j, k), v)
        })
    }

    /// Multilinear interpolation; zero outside the grid.
    pub fn eval(&self, x: &Vec3) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.components];
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..self.dim {
            let t = (x[a] - self.lower[a]) / self.spacing[a];
            let n = self.shape[a];
            if !(t >= 0.0 && t <= (n - 1) as f64) {
                return out;
            }
            let i = (t.floor() as usize).min(n - 2);
            base[a] = i;
            frac[a] = t - i as f64;
        }
        let corners = 1usize << self.dim;
        for c in 0..corners {
            let mut w = 1.0;
            let mut idx = [0usize; 3];
            for a in 0..self.dim {
                let bit = (c >> a) & 1;
                idx[a] = base[a] + bit;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            if w != 0.0 {
                for (o, v) in out.iter_mut().zip(self.value(idx[0], idx[1], idx[2])) {
                    *o += w * v;
                }
            }
        }
        out
    }
}
