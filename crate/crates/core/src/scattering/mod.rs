//! Scattering side: Aharonov–Bohm channel spectra, structured kernels,
//! the gauge action on kernels and recovery of a gauge from two kernels.
mod channels;
mod kernel;
mod solver;
mod sphere_kernel;

pub use channels::{
    ab_channel, ab_channel_quadrature, ab_kernel_channels, ab_kernel_channels_quadrature, pv_integral_excluded,
    ChannelSpectrum, PV_EXCLUSION_RADII,
};
pub use kernel::{
    apply_gauge_to_kernel, assemble_kernel, kernel_distance, kernel_distance_parts, KernelDistance, Remainder,
    ScatteringKernel, COMPARED_CHANNELS, DIAGONAL_MARGIN,
};
pub use solver::{
    gauge_equivalence_solver, gauge_equivalence_solver_sphere, SolverOutcome, Witness, DOMINANCE_MARGIN, FIT_OFFSETS,
};
pub use sphere_kernel::{
    apply_gauge_to_sphere_kernel, assemble_sphere_kernel, sphere_kernel_distance, sphere_kernel_distance_at,
    SphereKernel,
};
