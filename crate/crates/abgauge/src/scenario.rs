//! Scenario files (`abgauge-scenario/1`).
//!
//! ```json
//! {
//!   "schema": "abgauge-scenario/1",
//!   "kind": "classify",
//!   "seed": 7,
//!   "configs": [
//!     { "dimension": 2, "R": 1.0, "flux_profile": [[0, 0.3, 0], [1, 0.1, -0.05]],
//!       "short_range": { "kind": "ring_vortex", "params": { "amp": 0.5, "radius": 2.0, "width": 0.3 }, "C": 5, "eps0": 1 },
//!       "scalar": { "kind": "gaussian_ring", "params": { "amp": 1, "radius": 1.5, "width": 0.2 }, "C": 5, "eps0": 1 } },
//!     { "gauge_of": 0, "gauge": { "m": 1, "phi": [[2, 0.1, 0.0]] } }
//!   ]
//! }
//! ```
use std::path::{Path, PathBuf};
use std::sync::Arc;

use abgauge_core::angular::{AngularFunction, Interpolation, SphereFunction, SphereGrid};
use abgauge_core::fields::{
    Envelope, GaugeElement, PotentialConfig, ScalarField, ScalarKind, ScalarPotential,
    ShortRangeField, TransversalField, VectorField, VectorKind,
};
use abgauge_core::scattering::Remainder;
use abgauge_core::{Complex64, Dim, Tolerances, Vec3};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::io::{angular_from_triples, sphere_from_samples, Triple};

pub const SCENARIO_SCHEMA: &str = "abgauge-scenario/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Reconstruct,
    Classify,
    KernelLab,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: ScenarioKind,
    #[serde(default)]
    pub seed: u64,
    pub configs: Vec<ConfigEntry>,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub kernel: KernelSpec,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    /// Output directory for [`crate::emit_report`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<PathBuf>,
}

/// A configuration given explicitly or as the gauge transform of an earlier entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigEntry {
    Gauged(GaugedEntry),
    Explicit(ConfigSpec),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugedEntry {
    pub gauge_of: usize,
    pub gauge: GaugeSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub dimension: usize,
    #[serde(rename = "R")]
    pub obstacle_radius: f64,
    #[serde(default = "default_true")]
    pub convex: bool,
    /// Planar profile `a_hat` as Fourier triples.
    #[serde(default)]
    pub flux_profile: Vec<Triple>,
    /// Spatial `swirl x x / |x|^2` part.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swirl: Option<Vec3>,
    /// Spatial `grad psi(x/|x|)` part.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<SphereSpec>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub short_range: Vec<VectorTerm>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub scalar: Vec<ScalarTerm>,
}

fn default_true() -> bool {
    true
}

/// Accepts a single object or an array of them.
fn one_or_many<'de, D: Deserializer<'de>, T: Deserialize<'de>>(
    d: D,
) -> std::result::Result<Vec<T>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        Many(Vec<T>),
        One(T),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(t) => vec![t],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ScalarShape {
    Zero,
    Bracket {
        amp: f64,
        power: f64,
    },
    GaussianRing {
        amp: f64,
        radius: f64,
        width: f64,
    },
    GaussianBump {
        amp: f64,
        center: Vec<f64>,
        width: f64,
    },
    CompactBump {
        amp: f64,
        center: Vec<f64>,
        radius: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum VectorShape {
    Zero,
    Swirl { axis: Vec<f64> },
    RingVortex { amp: f64, radius: f64, width: f64 },
    Gradient(ScalarShape),
}

/// Decay bound `C <x>^{-eps0}` of a term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decay {
    #[serde(rename = "C")]
    pub c: f64,
    pub eps0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarTerm {
    #[serde(flatten)]
    pub shape: ScalarShape,
    #[serde(flatten)]
    pub decay: Option<Decay>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorTerm {
    #[serde(flatten)]
    pub shape: VectorShape,
    #[serde(flatten)]
    pub decay: Option<Decay>,
}

/// A function on the sphere: node samples `[w1, w2, w3, value]`, or a
/// polynomial `sum coef w1^a w2^b w3^c` sampled on an icosahedral grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SphereSpec {
    Samples(Vec<[f64; 4]>),
    Polynomial {
        level: usize,
        terms: Vec<(f64, [u32; 3])>,
    },
}

impl SphereSpec {
    pub fn build(&self) -> Result<SphereFunction> {
        match self {
            SphereSpec::Samples(rows) => sphere_from_samples(rows, Interpolation::Cubic),
            SphereSpec::Polynomial { level, terms } => {
                if *level > 5 {
                    return Err(Error::Scenario(format!(
                        "sphere grid level {level} is above 5"
                    )));
                }
                let grid = Arc::new(SphereGrid::icosahedral(*level));
                Ok(SphereFunction::from_fn(grid, Interpolation::Cubic, |w| {
                    terms
                        .iter()
                        .map(|(c, p)| {
                            c * w[0].powi(p[0] as i32)
                                * w[1].powi(p[1] as i32)
                                * w[2].powi(p[2] as i32)
                        })
                        .sum()
                }))
            }
        }
    }
}

/// `(m, phi or psi, L)`. Sphere phases are projected to zero mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    #[serde(default)]
    pub m: i64,
    #[serde(default)]
    pub phi: Vec<Triple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<SphereSpec>,
    #[serde(default, rename = "L", deserialize_with = "one_or_many")]
    pub l: Vec<ScalarTerm>,
}

impl GaugeSpec {
    pub fn build(&self, dim: Dim, tol: &Tolerances) -> Result<GaugeElement> {
        let g = match dim {
            Dim::Two => {
                if self.psi.is_some() {
                    return Err(Error::Scenario(
                        "planar gauge takes `phi`, not `psi`".into(),
                    ));
                }
                let phi = if self.phi.is_empty() {
                    AngularFunction::zero(1)
                } else {
                    angular_from_triples(&self.phi)?
                };
                GaugeElement::planar(self.m, phi, tol.mean)?
            }
            Dim::Three => {
                if !self.phi.is_empty() {
                    return Err(Error::Scenario(
                        "spatial gauge takes `psi`, not `phi`".into(),
                    ));
                }
                let psi = match &self.psi {
                    Some(s) => s.build()?.zero_mean(),
                    None => GaugeElement::identity(Dim::Three).phase_sphere(),
                };
                let mut g = GaugeElement::spatial(psi, tol.mean)?;
                g.m = self.m;
                g.validate(tol.mean)?;
                g
            }
        };
        match scalar_sum(&self.l, dim)? {
            (ScalarField::Zero, _) => Ok(g),
            (l, Some(env)) => Ok(g.with_short_range(l, env)),
            (l, None) => Ok(GaugeElement { l, ..g }),
        }
    }
}

trait SpherePhase {
    fn phase_sphere(self) -> SphereFunction;
}

impl SpherePhase for GaugeElement {
    fn phase_sphere(self) -> SphereFunction {
        match self.phase {
            abgauge_core::fields::Phase::Sphere(f) => f,
            abgauge_core::fields::Phase::Circle(_) => {
                unreachable!("spatial identity has a sphere phase")
            }
        }
    }
}

fn point(v: &[f64], dim: Dim) -> Result<Vec3> {
    if v.len() != dim.n() {
        return Err(Error::Scenario(format!(
            "point {v:?} has {} coordinates in dimension {}",
            v.len(),
            dim.n()
        )));
    }
    let mut p = [0.0; 3];
    p[..v.len()].copy_from_slice(v);
    Ok(p)
}

impl ScalarShape {
    pub fn build(&self, dim: Dim) -> Result<ScalarField> {
        let kind = match self {
            ScalarShape::Zero => return Ok(ScalarField::Zero),
            &ScalarShape::Bracket { amp, power } => ScalarKind::Bracket { amp, power },
            &ScalarShape::GaussianRing { amp, radius, width } => {
                ScalarKind::GaussianRing { amp, radius, width }
            }
            ScalarShape::GaussianBump { amp, center, width } => ScalarKind::GaussianBump {
                amp: *amp,
                center: point(center, dim)?,
                width: *width,
            },
            ScalarShape::CompactBump {
                amp,
                center,
                radius,
            } => ScalarKind::CompactBump {
                amp: *amp,
                center: point(center, dim)?,
                radius: *radius,
            },
        };
        Ok(ScalarField::Analytic(kind))
    }
}

impl VectorShape {
    pub fn build(&self, dim: Dim) -> Result<VectorField> {
        Ok(match self {
            VectorShape::Zero => VectorField::Zero,
            VectorShape::Swirl { axis } => {
                let axis = if dim == Dim::Two && axis.len() == 1 {
                    [0.0, 0.0, axis[0]]
                } else {
                    point(axis, Dim::Three)?
                };
                VectorField::Analytic(VectorKind::Swirl { axis })
            }
            &VectorShape::RingVortex { amp, radius, width } => {
                if dim != Dim::Two {
                    return Err(Error::Scenario("ring_vortex is a planar field".into()));
                }
                VectorField::Analytic(VectorKind::RingVortex { amp, radius, width })
            }
            VectorShape::Gradient(s) => VectorField::Gradient(s.build(dim)?),
        })
    }
}

fn combined(decays: impl Iterator<Item = Option<Decay>>) -> Option<Envelope> {
    let mut out: Option<Envelope> = None;
    for d in decays {
        let e = Envelope::new(d?.c, d?.eps0);
        out = Some(out.map_or(e, |o| o.combine(&e)));
    }
    out
}

/// Sum of the terms; the envelope is missing if any nonzero term lacks one.
fn scalar_sum(terms: &[ScalarTerm], dim: Dim) -> Result<(ScalarField, Option<Envelope>)> {
    let live: Vec<&ScalarTerm> = terms
        .iter()
        .filter(|t| t.shape != ScalarShape::Zero)
        .collect();
    let mut field = ScalarField::Zero;
    for t in &live {
        let f = t.shape.build(dim)?;
        field = if field.is_zero() { f } else { field.sum(f) };
    }
    Ok((field, combined(live.iter().map(|t| t.decay))))
}

fn vector_sum(terms: &[VectorTerm], dim: Dim) -> Result<(VectorField, Option<Envelope>)> {
    let live: Vec<&VectorTerm> = terms
        .iter()
        .filter(|t| t.shape != VectorShape::Zero)
        .collect();
    let mut field = VectorField::Zero;
    for t in &live {
        let f = t.shape.build(dim)?;
        field = if field.is_zero() { f } else { field.sum(f) };
    }
    Ok((field, combined(live.iter().map(|t| t.decay))))
}

impl ConfigSpec {
    pub fn dim(&self) -> Result<Dim> {
        Ok(Dim::from_n(self.dimension)?)
    }

    pub fn build(&self) -> Result<PotentialConfig> {
        let dim = self.dim()?;
        let transversal = match dim {
            Dim::Two => {
                if self.swirl.is_some() || self.gradient.is_some() {
                    return Err(Error::Scenario(
                        "planar configuration takes `flux_profile` only".into(),
                    ));
                }
                let profile = if self.flux_profile.is_empty() {
                    AngularFunction::zero(1)
                } else {
                    angular_from_triples(&self.flux_profile)?
                };
                TransversalField::planar(profile)
            }
            Dim::Three => {
                if !self.flux_profile.is_empty() {
                    return Err(Error::Scenario(
                        "spatial configuration takes `swirl` and `gradient`".into(),
                    ));
                }
                let gradient = self.gradient.as_ref().map(|g| g.build()).transpose()?;
                TransversalField::Spatial {
                    swirl: self.swirl.unwrap_or([0.0; 3]),
                    gradient,
                }
            }
        };
        let (a1, a1_env) = vector_sum(&self.short_range, dim)?;
        let (v, v_env) = scalar_sum(&self.scalar, dim)?;
        let mut cfg = PotentialConfig::new(
            self.obstacle_radius,
            transversal,
            ShortRangeField {
                field: a1,
                envelope: a1_env,
            },
            ScalarPotential {
                field: v,
                envelope: v_env,
            },
        )?;
        cfg.convex = self.convex;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Geometry {
    pub angles: usize,
    pub offsets: usize,
    /// Largest impact parameter of the sinogram; defaults to `3 R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<f64>,
    /// Outer radius of the comparison annulus; defaults to `8 R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_radius: Option<f64>,
    /// Random lines used to compare scalar transforms.
    pub probe_lines: usize,
    /// Random planes of the spatial plane sweep.
    pub planes: usize,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            angles: 180,
            offsets: 256,
            p_max: None,
            outer_radius: None,
            probe_lines: 128,
            planes: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSource {
    /// Built from each configuration's long-range data (or synthesized from
    /// the first one when the second is a declared gauge transform).
    #[default]
    Model,
    /// Second kernel synthesized from the first by the declared gauge.
    Synthesized,
    /// Read from planar kernel files.
    Files,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSpec {
    #[serde(default)]
    pub source: KernelSource,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathBuf>,
    pub grid: usize,
    #[serde(rename = "lambda")]
    pub energy: f64,
    pub remainder: RemainderSpec,
    /// Declared singular support of spatial kernels; defaults to "swirl present".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_support: Option<bool>,
    /// Sphere grid level of spatial kernels.
    pub sphere_level: usize,
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec {
            source: KernelSource::Model,
            paths: Vec::new(),
            grid: 128,
            energy: 1.0,
            remainder: RemainderSpec::default(),
            singular_support: None,
            sphere_level: 2,
        }
    }
}

/// Smooth remainder shared by the model kernels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RemainderSpec {
    Zero,
    /// Periodic Gaussian `amp exp(-d^2 / (2 width^2))` around `center` on the torus.
    GaussianBump {
        amp: [f64; 2],
        center: [f64; 2],
        width: f64,
        #[serde(rename = "C")]
        c: f64,
        delta: f64,
    },
}

impl Default for RemainderSpec {
    fn default() -> Self {
        RemainderSpec::GaussianBump {
            amp: [0.2, 0.05],
            center: [2.5, 1.5],
            width: 0.4,
            c: 1.0,
            delta: 0.5,
        }
    }
}

impl RemainderSpec {
    pub fn build(&self, size: usize) -> Result<Remainder> {
        use std::f64::consts::{PI, TAU};
        match *self {
            RemainderSpec::Zero => Ok(Remainder::zero(size)?),
            RemainderSpec::GaussianBump {
                amp,
                center,
                width,
                c,
                delta,
            } => {
                let d = |a: f64, c: f64| {
                    let x = (a - c).rem_euclid(TAU);
                    if x > PI {
                        x - TAU
                    } else {
                        x
                    }
                };
                Ok(Remainder::from_fn(size, c, delta, |t, s| {
                    let r2 = d(t, center[0]).powi(2) + d(s, center[1]).powi(2);
                    let e = (-r2 / (2.0 * width * width)).exp();
                    Complex64::new(amp[0] * e, amp[1] * e)
                })?)
            }
        }
    }
}

/// Overrides of the default tolerances.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub mean: Option<f64>,
    pub tail: Option<f64>,
    pub curl: Option<f64>,
    pub loop_integral: Option<f64>,
    pub path: Option<f64>,
    pub phase_fit: Option<f64>,
    pub kernel: Option<f64>,
    pub leading_order: Option<f64>,
    /// Largest scalar-transform or pointwise `V` disagreement accepted.
    pub scalar: Option<f64>,
    /// Accuracy of the flux read off the X-ray data.
    pub flux: Option<f64>,
    /// Largest reconstructed `|B|` accepted as "no magnetic field".
    pub field: Option<f64>,
}

/// Tolerances of the pipeline stages beyond the numerical core.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PipelineTolerances {
    pub scalar: f64,
    pub flux: f64,
    pub field: f64,
}

impl Default for PipelineTolerances {
    fn default() -> Self {
        PipelineTolerances {
            scalar: 1e-7,
            flux: 1e-6,
            field: 1e-3,
        }
    }
}

impl ToleranceSpec {
    pub fn resolve(&self) -> (Tolerances, PipelineTolerances) {
        let d = Tolerances::default();
        let p = PipelineTolerances::default();
        (
            Tolerances {
                mean: self.mean.unwrap_or(d.mean),
                tail: self.tail.unwrap_or(d.tail),
                curl: self.curl.unwrap_or(d.curl),
                loop_integral: self.loop_integral.unwrap_or(d.loop_integral),
                path: self.path.unwrap_or(d.path),
                phase_fit: self.phase_fit.unwrap_or(d.phase_fit),
                kernel: self.kernel.unwrap_or(d.kernel),
                leading_order: self.leading_order.unwrap_or(d.leading_order),
            },
            PipelineTolerances {
                scalar: self.scalar.unwrap_or(p.scalar),
                flux: self.flux.unwrap_or(p.flux),
                field: self.field.unwrap_or(p.field),
            },
        )
    }
}

/// A configuration with the gauge it was declared from, if any.
#[derive(Clone, Debug)]
pub struct ResolvedConfig {
    pub config: PotentialConfig,
    /// `(index of the base entry, gauge)` for gauged entries.
    pub gauge_of: Option<(usize, GaugeElement)>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let s: Scenario = crate::io::read_json(path)?;
        s.check_schema()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.check_schema()?;
        Ok(s)
    }

    fn check_schema(&self) -> Result<()> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(Error::Scenario(format!(
                "schema {:?}, expected {SCENARIO_SCHEMA:?}",
                self.schema
            )));
        }
        Ok(())
    }

    pub fn tolerances(&self) -> (Tolerances, PipelineTolerances) {
        self.tolerances.resolve()
    }

    /// Builds every configuration and checks that they share the dimension
    /// and the obstacle radius.
    pub fn resolve_configs(&self) -> Result<Vec<ResolvedConfig>> {
        let (tol, _) = self.tolerances();
        let mut out: Vec<ResolvedConfig> = Vec::with_capacity(self.configs.len());
        for (i, entry) in self.configs.iter().enumerate() {
            let resolved = match entry {
                ConfigEntry::Explicit(spec) => ResolvedConfig {
                    config: spec.build()?,
                    gauge_of: None,
                },
                ConfigEntry::Gauged(GaugedEntry { gauge_of, gauge }) => {
                    let base = out.get(*gauge_of).ok_or_else(|| {
                        Error::Scenario(format!(
                            "config {i}: gauge_of {gauge_of} must name an earlier entry"
                        ))
                    })?;
                    let g = gauge.build(base.config.dim, &tol)?;
                    let config = abgauge_core::fields::apply_gauge_to_potential(&base.config, &g)?;
                    ResolvedConfig {
                        config,
                        gauge_of: Some((*gauge_of, g)),
                    }
                }
            };
            if let Some(first) = out.first() {
                let (a, b) = (&first.config, &resolved.config);
                if a.dim != b.dim || a.obstacle_radius != b.obstacle_radius {
                    return Err(Error::Scenario(
                        "configurations must share dimension and obstacle radius".into(),
                    ));
                }
            }
            out.push(resolved);
        }
        let need = match self.kind {
            ScenarioKind::Classify => 2,
            ScenarioKind::Reconstruct | ScenarioKind::KernelLab => 1,
        };
        if out.len() < need {
            return Err(Error::Scenario(format!(
                "{:?} scenario needs {need} configuration(s)",
                self.kind
            )));
        }
        Ok(out)
    }
}
