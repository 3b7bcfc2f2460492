//! X-ray transforms, winding resolution and tomographic reconstruction.
//!
//! Lines are parametrized as `x0 + s omega` with `x0 . omega = 0` and must
//! avoid the obstacle `|x| <= R`. The vector transform of the long-range
//! part is evaluated in closed form (`+-alpha pi` for the flux, an antipodal
//! difference for the gradient part), the short-range parts by quadrature
//! truncated according to their decay envelopes.
mod forms;
mod gauge_scalar;
mod integrals;
mod line;
mod radon;
mod winding;

pub use forms::{antipodal_defect, plane_restrict, plane_restrict_curl, AntipodalDefect};
pub use gauge_scalar::{find_gauge_scalar, Annulus, GaugeScalar};
pub use integrals::{
    line_integral_long_range, line_integral_scalar, line_integral_short_range, line_integral_vector,
    line_integral_vector_quadrature, truncated_line_integral,
};
pub use line::{Line, Plane, XRayComponent, XRayData, XRayValues};
pub use radon::{
    default_completion_order, invert_sinogram, radon_invert_scalar, recover_field_2d, RadonOptions, Reconstruction,
    Sinogram, SinogramGeometry, MAX_COMPLETION_GAIN,
};
pub use winding::{resolve_winding, HALF_INTEGER_GUARD};
