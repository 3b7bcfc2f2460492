//! Potentials, the gauge group, flux and curl.
//!
//! A configuration is `A = A0 + A1`, `V` outside an obstacle of radius `R`:
//! `A0` is homogeneous of degree -1 and transversal (`x . A0 = 0`), `A1` and
//! `V` are short range with declared decay envelopes. In the plane
//! `A0 = (-x2, x1)/|x|^2 a_hat(theta)` splits into the Aharonov–Bohm flux
//! `alpha = mean(a_hat)` plus the gradient of a zero-mean angular function.
mod calculus;
mod config;
mod gauge;
mod grid;
mod source;
mod transversal;

pub use calculus::{
    circulation, config_curl, curl, curl_at, extract_leading_order, flux, RadialSamples, TwoForm,
    DEFAULT_CURL_STEP,
};
pub use config::{PotentialConfig, ScalarPotential, ShortRangeField};
pub use gauge::{apply_gauge_to_potential, GaugeElement, Phase};
pub use grid::GridField;
pub use source::{
    numerical_gradient, Envelope, ScalarField, ScalarKind, ScalarSource, VectorField, VectorKind, VectorSource,
};
pub use transversal::{decompose_transversal, eval_ab_potential, Decomposition, TransversalField};
