//! Default numerical tolerances shared across modules.

/// One place for every tolerance that crosses module boundaries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Mean of an angular function treated as zero below this magnitude.
    pub mean: f64,
    /// Bound on the neglected tails of truncated line integrals.
    pub tail: f64,
    /// Largest curl accepted as "curl-free".
    pub curl: f64,
    /// Largest circulation accepted as "no residual flux".
    pub loop_integral: f64,
    /// Largest disagreement of two path integrals to the same point.
    pub path: f64,
    /// Phase fit accuracy reported for recovered gauges.
    pub phase_fit: f64,
    /// Kernel agreement (grid and channel parts) for equality checks.
    pub kernel: f64,
    /// Residual accepted by the leading-order extrapolation.
    pub leading_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            mean: 1e-10,
            tail: 1e-9,
            curl: 1e-6,
            loop_integral: 1e-7,
            path: 1e-7,
            phase_fit: 1e-6,
            kernel: 1e-8,
            leading_order: 1e-6,
        }
    }
}
