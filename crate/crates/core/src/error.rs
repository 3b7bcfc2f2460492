use alloc::string::String;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("function has nonzero mean {mean:e}; subtract the flux before integrating")]
    NonzeroMean { mean: f64 },
    #[error("angular function is not real-valued (coefficient k={k} breaks conjugate symmetry)")]
    NotReal { k: i64 },
    #[error("field evaluated at the origin")]
    OriginSingularity,
    #[error("field is not transversal: max |x.A| = {residual:e}")]
    NotTransversal { residual: f64 },
    #[error("field is not homogeneous of degree -1: max defect {residual:e}")]
    NotHomogeneous { residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("circle of radius {radius} lies inside the obstacle of radius {obstacle}")]
    CircleInsideObstacle { radius: f64, obstacle: f64 },
    #[error("sampling region reaches |x| = {radius} inside the obstacle of radius {obstacle}")]
    RegionTouchesObstacle { radius: f64, obstacle: f64 },
    #[error("leading-order extrapolation did not converge (residual {residual:e})")]
    NonConvergent { residual: f64 },
    #[error("line at distance {distance} hits the obstacle of radius {obstacle}")]
    LineHitsObstacle { distance: f64, obstacle: f64 },
    #[error("plane at distance {distance} hits the obstacle of radius {obstacle}")]
    PlaneHitsObstacle { distance: f64, obstacle: f64 },
    #[error("no usable decay envelope declared; line integral tail cannot be bounded")]
    TailNotBounded,
    #[error("decay envelope violated at |x| = {radius}: |f| = {value:e} > bound {bound:e}")]
    EnvelopeViolated { radius: f64, value: f64, bound: f64 },
    #[error("phase branch ambiguous at sample {index} (jump {jump})")]
    BranchAmbiguous { index: usize, jump: f64 },
    #[error("insufficient tomographic coverage: {reason}")]
    InsufficientCoverage { reason: String },
    #[error("difference field is not curl-free (defect {defect:e})")]
    NotCurlFree { defect: f64 },
    #[error("difference field carries residual flux (circulation {circulation:e})")]
    ResidualFlux { circulation: f64 },
    #[error("smooth remainder exceeds the declared bound C|t-t'|^-delta by factor {ratio}")]
    RemainderBoundViolated { ratio: f64 },
    #[error("kernel channel {k} is not unimodular (|2 pi c_k| = {modulus})")]
    NotUnitary { k: i64, modulus: f64 },
    #[error("grids or labels do not match: {reason}")]
    GridMismatch { reason: String },
    #[error("singular part missing: {reason}")]
    SingularPartMissing { reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidInput(String::from(msg))
}
