//! Numerical core for gauge equivalence of long-range magnetic potentials.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every algorithm of the
//! toolkit:
//!
//! * [`angular`]: smooth functions on the circle (finite Fourier series) and on
//!   the 2-sphere (antipodally closed icosahedral grids).
//! * [`fields`]: transversal, short-range and scalar potentials, the gauge
//!   group, flux and curl, and the flux-plus-gradient decomposition of a
//!   homogeneous transversal potential.
//! * [`tomography`]: scalar and vector X-ray transforms, winding resolution,
//!   filtered backprojection with obstacle-shadow completion, gauge-scalar
//!   recovery and plane restriction of two-forms.
//! * [`scattering`]: Aharonov–Bohm channel spectra, structured scattering
//!   kernels, the gauge action on kernels and the gauge-equivalence solver.
//!
//! File formats, scenario orchestration and the command line live in the
//! `abgauge` companion crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod angular;
pub mod error;
pub mod fields;
pub mod geom;
pub mod linalg;
pub mod quad;
pub mod sampling;
pub mod scattering;
pub mod tolerances;
pub mod tomography;

pub use error::{Error, Result};
pub use geom::{Dim, Vec3};
pub use num_complex::Complex64;
pub use tolerances::Tolerances;
