//! End-to-end scenarios: kernels → solver → gauge removal → short-range and
//! scalar comparison (`classify`), and forward projection → inversion
//! (`reconstruct`).
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use abgauge_core::angular::{SphereFunction, SphereGrid};
use abgauge_core::fields::{
    apply_gauge_to_potential, curl_at, decompose_transversal, extract_leading_order, GaugeElement,
    Phase, PotentialConfig, RadialSamples, ShortRangeField, TransversalField, VectorField,
    DEFAULT_CURL_STEP,
};
use abgauge_core::geom::{dot, norm, normalize, scale, sub};
use abgauge_core::scattering::{
    apply_gauge_to_kernel, apply_gauge_to_sphere_kernel, assemble_kernel, assemble_sphere_kernel,
    gauge_equivalence_solver, gauge_equivalence_solver_sphere, kernel_distance,
    sphere_kernel_distance, ScatteringKernel, SolverOutcome, SphereKernel, Witness,
    COMPARED_CHANNELS,
};
use abgauge_core::tomography::{
    find_gauge_scalar, line_integral_scalar, line_integral_vector, plane_restrict_curl,
    radon_invert_scalar, recover_field_2d, Annulus, GaugeScalar, Line, Plane, RadonOptions,
    Reconstruction, Sinogram, SinogramGeometry, XRayComponent, XRayData, XRayValues,
};
use abgauge_core::{Dim, Error as CoreError, Tolerances, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result, StageExt};
use crate::io::significant_triples;
use crate::report::{tagged, GaugeReport, Report, Stage, Status, Table, Verdict, WitnessReport};
use crate::scenario::{
    KernelSource, KernelSpec, PipelineTolerances, ResolvedConfig, Scenario, ScenarioKind,
};

/// The comparison annulus starts this far outside the obstacle.
const INNER_MARGIN: f64 = 1.1;
/// Directions averaged per distance when reading the flux off X-ray data.
const FLUX_DIRECTIONS: usize = 64;
/// Distances `4 R 2^k`, `k < FLUX_DISTANCES`, of the flux read-off.
const FLUX_DISTANCES: usize = 6;
/// Relative-L2 targets of the reconstructions against ground truth.
pub const SCALAR_RECONSTRUCTION_TARGET: f64 = 0.05;
pub const FIELD_RECONSTRUCTION_TARGET: f64 = 0.08;

/// Scattering data of a classify run.
#[derive(Clone, Debug)]
pub enum KernelPair {
    Planar(ScatteringKernel, ScatteringKernel),
    Sphere(SphereKernel, SphereKernel),
}

impl KernelPair {
    pub fn swapped(self) -> Self {
        match self {
            KernelPair::Planar(a, b) => KernelPair::Planar(b, a),
            KernelPair::Sphere(a, b) => KernelPair::Sphere(b, a),
        }
    }
}

/// Everything [`classify`] needs.
#[derive(Clone, Debug)]
pub struct ClassifyInput {
    pub configs: [PotentialConfig; 2],
    pub kernels: KernelPair,
    /// Statements of where the kernels came from.
    pub provenance: Vec<String>,
    pub seed: u64,
    pub probe_lines: usize,
    pub outer_radius: f64,
    pub tol: Tolerances,
    pub ptol: PipelineTolerances,
}

impl ClassifyInput {
    /// Same input with the two configurations (and kernels) exchanged.
    pub fn swapped(self) -> Self {
        let [a, b] = self.configs;
        ClassifyInput {
            configs: [b, a],
            kernels: self.kernels.swapped(),
            ..self
        }
    }
}

/// Runs the scenario according to its kind.
pub fn run(scenario: &Scenario) -> Result<Report> {
    match scenario.kind {
        ScenarioKind::Classify => run_classify(scenario),
        ScenarioKind::Reconstruct => run_reconstruct(scenario),
        ScenarioKind::KernelLab => run_kernel_lab(scenario),
    }
}

fn outer_radius(scenario: &Scenario, r: f64) -> f64 {
    scenario.geometry.outer_radius.unwrap_or(8.0 * r)
}

fn regime(configs: &[&PotentialConfig]) -> String {
    if configs.iter().all(|c| c.convex) {
        "proven regime: convex obstacle".into()
    } else {
        "outside proven regime: non-convex obstacle (processed identically)".into()
    }
}

// ---- kernels ----------------------------------------------------------------

/// Model kernel of a planar configuration: Aharonov–Bohm kernel of its flux
/// with the prefactor phases of its angular potential and the declared
/// remainder.
pub fn planar_model_kernel(
    config: &PotentialConfig,
    spec: &KernelSpec,
    tol: &Tolerances,
) -> Result<ScatteringKernel> {
    let d = decompose_transversal(&config.transversal, tol.mean).stage("kernels")?;
    let remainder = spec.remainder.build(spec.grid)?;
    assemble_kernel(d.alpha, d.a0.clone(), d.a0, remainder, spec.energy).stage("kernels")
}

fn sphere_phase(config: &PotentialConfig, level: usize) -> Result<(Vec3, SphereFunction)> {
    let TransversalField::Spatial { swirl, gradient } = &config.transversal else {
        return Err(Error::Scenario(
            "spatial kernel of a planar configuration".into(),
        ));
    };
    let grid = Arc::new(SphereGrid::icosahedral(level));
    let psi = match gradient {
        None => SphereFunction::zero(grid),
        Some(g) if g.grid().same_nodes(&grid) => g.clone(),
        Some(_) => {
            return Err(Error::Scenario(format!(
                "gradient phases must be sampled on the level-{level} kernel grid"
            )))
        }
    };
    Ok((*swirl, psi))
}

/// Model kernel of a spatial configuration (see
/// [`abgauge_core::scattering::assemble_sphere_kernel`]).
pub fn sphere_model_kernel(config: &PotentialConfig, spec: &KernelSpec) -> Result<SphereKernel> {
    let (swirl, psi) = sphere_phase(config, spec.sphere_level)?;
    let flag = spec.singular_support.unwrap_or(norm(&swirl) > 0.0);
    assemble_sphere_kernel(&swirl, &psi, spec.energy, flag).stage("kernels")
}

const MODEL_NOTE: &str =
    "model kernel: flux channels of the long-range part with its angular prefactor phases \
     and the declared smooth remainder; the short-range potential and V do not enter the kernel";

const DECAY_NOTE: &str =
    "recovery of A1 and V relies on the declared decay envelopes; their rapid decay is assumed, not verified";

fn build_kernels(
    scenario: &Scenario,
    configs: &[ResolvedConfig],
    tol: &Tolerances,
) -> Result<(KernelPair, Vec<String>)> {
    let spec = &scenario.kernel;
    let (c1, c2) = (&configs[0], &configs[1]);
    let gauged = match &c2.gauge_of {
        Some((0, g)) => Some(g),
        _ => None,
    };
    let synthesize = match spec.source {
        KernelSource::Files => {
            if c1.config.dim != Dim::Two || spec.paths.len() != 2 {
                return Err(Error::Scenario(
                    "kernel files: two planar kernel headers expected".into(),
                ));
            }
            let k1 = crate::io::read_kernel(&spec.paths[0])?;
            let k2 = crate::io::read_kernel(&spec.paths[1])?;
            let note = format!(
                "kernels given: read from {} and {}",
                spec.paths[0].display(),
                spec.paths[1].display()
            );
            return Ok((KernelPair::Planar(k1, k2), vec![note]));
        }
        KernelSource::Synthesized => Some(gauged.ok_or_else(|| {
            Error::Scenario(
                "synthesized kernels need config 1 declared as a gauge of config 0".into(),
            )
        })?),
        KernelSource::Model => gauged,
    };
    let mut provenance = vec![format!("kernel 1: {MODEL_NOTE}")];
    let pair = match c1.config.dim {
        Dim::Two => {
            let k1 = planar_model_kernel(&c1.config, spec, tol)?;
            let k2 = match synthesize {
                Some(g) => apply_gauge_to_kernel(&k1, g).stage("kernels")?,
                None => planar_model_kernel(&c2.config, spec, tol)?,
            };
            KernelPair::Planar(k1, k2)
        }
        Dim::Three => {
            let k1 = sphere_model_kernel(&c1.config, spec)?;
            let k2 = match synthesize {
                Some(g) => apply_gauge_to_sphere_kernel(&k1, g).stage("kernels")?,
                None => sphere_model_kernel(&c2.config, spec)?,
            };
            KernelPair::Sphere(k1, k2)
        }
    };
    provenance.push(match synthesize {
        Some(_) => {
            "kernel 2: synthesized from kernel 1 by the gauge action of the declared gauge".into()
        }
        None => format!("kernel 2: {MODEL_NOTE}"),
    });
    Ok((pair, provenance))
}

// ---- classify ---------------------------------------------------------------

/// Classify scenario: are the two configurations gauge equivalent?
pub fn run_classify(scenario: &Scenario) -> Result<Report> {
    if scenario.kind != ScenarioKind::Classify {
        return Err(Error::Scenario(
            "run_classify needs a classify scenario".into(),
        ));
    }
    let configs = scenario.resolve_configs()?;
    let (tol, ptol) = scenario.tolerances();
    let (kernels, provenance) = build_kernels(scenario, &configs, &tol)?;
    let r = configs[0].config.obstacle_radius;
    let input = ClassifyInput {
        configs: [configs[0].config.clone(), configs[1].config.clone()],
        kernels,
        provenance,
        seed: scenario.seed,
        probe_lines: scenario.geometry.probe_lines,
        outer_radius: outer_radius(scenario, r),
        tol,
        ptol,
    };
    let mut report = classify(&input)?;
    report.kind = Some(ScenarioKind::Classify);
    report.name = scenario.name.clone();
    Ok(report)
}

fn skip_rest(report: &mut Report, names: &[&str]) {
    for n in names {
        let mut s = Stage::new(n);
        s.status = Status::Skipped;
        report.stages.push(s);
    }
}

const STAGES: [&str; 5] = ["kernels", "solver", "transversal", "short_range", "scalar"];

fn stages_after(name: &str) -> &'static [&'static str] {
    let i = STAGES
        .iter()
        .position(|s| *s == name)
        .map_or(STAGES.len(), |i| i + 1);
    &STAGES[i..]
}

/// The stage chain of a classify run on prepared input.
pub fn classify(input: &ClassifyInput) -> Result<Report> {
    let [c1, c2] = &input.configs;
    if c1.dim != c2.dim || c1.obstacle_radius != c2.obstacle_radius {
        return Err(Error::Scenario(
            "configurations must share dimension and obstacle radius".into(),
        ));
    }
    let tol = &input.tol;
    let mut report = Report {
        seed: input.seed,
        provenance: input.provenance.clone(),
        regime: regime(&[c1, c2]),
        ..Report::default()
    };

    // kernels
    let mut stage = Stage::new("kernels");
    match &input.kernels {
        KernelPair::Planar(k1, k2) => {
            for c in [c1, c2] {
                let d = decompose_transversal(&c.transversal, tol.mean).stage("kernels")?;
                report
                    .alpha
                    .push(tagged(d.alpha, tol.mean, "decompose_transversal"));
            }
            stage.record(
                "distance",
                kernel_distance(k1, k2).stage("kernels")?,
                tol.kernel,
                "kernel_distance",
            );
            report.add_table(kernel_tables(k1, k2));
            report.add_table(channel_table(k1, k2));
        }
        KernelPair::Sphere(k1, k2) => {
            stage.record(
                "distance",
                sphere_kernel_distance(k1, k2).stage("kernels")?,
                tol.kernel,
                "sphere_kernel_distance",
            );
            report.add_table(sphere_kernel_table(k1, k2));
        }
    }
    report.stages.push(stage);

    // solver
    let mut stage = Stage::new("solver");
    let outcome = match &input.kernels {
        KernelPair::Planar(k1, k2) => gauge_equivalence_solver(k1, k2, tol),
        KernelPair::Sphere(k1, k2) => gauge_equivalence_solver_sphere(k1, k2, tol),
    }
    .stage("solver")?;
    let gauge = match outcome {
        SolverOutcome::Equivalent {
            gauge,
            residual,
            antipodal,
        } => {
            stage.check(
                "residual",
                residual,
                tol.kernel,
                "kernel distance after the recovered gauge",
            );
            if let Some(a) = antipodal {
                stage.record(
                    "antipodal_defect",
                    a.max_defect,
                    tol.phase_fit,
                    "antipodal_defect of the recovered phase",
                );
            }
            gauge
        }
        SolverOutcome::NotEquivalent { witness } => {
            stage.fail("kernels are not gauge related");
            report.stages.push(stage);
            report.witness = Some(kernel_witness(&witness, tol));
            report.verdict = Some(Verdict::NotEquivalent);
            skip_rest(&mut report, stages_after("solver"));
            return Ok(report);
        }
        SolverOutcome::Ambiguous { reason } => {
            let d = report.stages[0].numbers["distance"].value;
            if d <= tol.kernel {
                report.caveats.push(format!(
                    "{reason}; the kernels agree, so the identity is used and the verdict holds up to the unresolved gauge"
                ));
                stage.note = Some(reason);
                GaugeElement::identity(c1.dim)
            } else {
                stage.fail(reason.clone());
                report.caveats.push(reason);
                report.stages.push(stage);
                report.verdict = Some(Verdict::Ambiguous);
                skip_rest(&mut report, stages_after("solver"));
                return Ok(report);
            }
        }
    };
    report.gauge = Some(gauge_report(&gauge, tol));
    report.stages.push(stage);

    // transversal parts after removing the gauge
    let mut stage = Stage::new("transversal");
    let moved = apply_gauge_to_potential(c2, &gauge.inverse()).stage("transversal")?;
    if let Some(w) = compare_transversal(c1, &moved, tol, &mut stage)? {
        report.stages.push(stage);
        report.witness = Some(w);
        report.verdict = Some(Verdict::NotEquivalent);
        skip_rest(&mut report, stages_after("transversal"));
        return Ok(report);
    }
    report.stages.push(stage);

    // short-range difference must be a gradient
    report.caveats.push(DECAY_NOTE.into());
    let mut stage = Stage::new("short_range");
    let r = c1.obstacle_radius;
    let region = Annulus::new(INNER_MARGIN * r, input.outer_radius).stage("short_range")?;
    let adiff = difference(&moved.short_range, &c1.short_range);
    match find_gauge_scalar(&adiff, c1.dim, &region, tol) {
        Ok(l) => {
            stage.check(
                "path_defect",
                l.path_defect(),
                tol.path,
                "find_gauge_scalar path agreement",
            );
            let table = gauge_scalar_table(&l, &region);
            let peak = table
                .rows
                .iter()
                .map(|row| row[row.len() - 1])
                .filter(|v| v.is_finite())
                .fold(0.0, |m: f64, v| m.max(v.abs()));
            if let Some(g) = report.gauge.as_mut() {
                g.l1_table = Some(table.file_name());
                g.l1_max_abs = Some(tagged(peak, tol.path, "find_gauge_scalar"));
            }
            report.add_table(table);
        }
        Err(CoreError::NotCurlFree { defect }) => {
            stage.fail("short-range difference is not curl free");
            report.witness = Some(WitnessReport::MagneticField {
                reason: "magnetic fields differ: the short-range difference has nonzero curl"
                    .into(),
                defect: tagged(defect, tol.curl, "find_gauge_scalar curl probe"),
            });
        }
        Err(CoreError::ResidualFlux { circulation }) => {
            stage.fail("short-range difference carries flux");
            report.witness = Some(WitnessReport::MagneticField {
                reason: "the short-range difference circulates around the obstacle".into(),
                defect: tagged(
                    circulation,
                    tol.loop_integral,
                    "find_gauge_scalar circulation",
                ),
            });
        }
        Err(e) => {
            return Err(Error::Stage {
                stage: "short_range",
                source: e,
            })
        }
    }
    if !stage.passed() {
        report.stages.push(stage);
        report.verdict = Some(Verdict::NotEquivalent);
        skip_rest(&mut report, stages_after("short_range"));
        return Ok(report);
    }
    report.stages.push(stage);

    // scalar potentials
    let mut stage = Stage::new("scalar");
    let witness = compare_scalars(c1, &moved, input, &mut stage)?;
    let passed = stage.passed();
    report.stages.push(stage);
    if passed {
        report.verdict = Some(Verdict::Equivalent);
    } else {
        report.witness = Some(witness);
        report.verdict = Some(Verdict::NotEquivalent);
    }
    Ok(report)
}

fn kernel_witness(w: &Witness, tol: &Tolerances) -> WitnessReport {
    match *w {
        Witness::Channel { k, first, second } => WitnessReport::Channel {
            k,
            first: [first.re, first.im],
            second: [second.re, second.im],
        },
        Witness::Grid {
            theta,
            theta_prime,
            difference,
        } => WitnessReport::Kernel {
            at: vec![theta, theta_prime],
            difference: tagged(
                difference,
                tol.kernel,
                "kernel distance after the best gauge",
            ),
        },
        Witness::Sphere {
            omega,
            omega_prime,
            difference,
        } => WitnessReport::Kernel {
            at: omega.iter().chain(&omega_prime).copied().collect(),
            difference: tagged(
                difference,
                tol.kernel,
                "sphere kernel distance after the best gauge",
            ),
        },
    }
}

fn gauge_report(g: &GaugeElement, tol: &Tolerances) -> GaugeReport {
    let (phi, psi) = match &g.phase {
        Phase::Circle(f) => (
            Some(tagged(
                significant_triples(f),
                tol.phase_fit,
                "gauge_equivalence_solver",
            )),
            None,
        ),
        Phase::Sphere(f) => {
            let rows = f
                .grid()
                .nodes()
                .iter()
                .zip(f.values())
                .map(|(w, v)| [w[0], w[1], w[2], *v])
                .collect();
            (
                None,
                Some(tagged(
                    rows,
                    tol.phase_fit,
                    "gauge_equivalence_solver_sphere",
                )),
            )
        }
    };
    GaugeReport {
        m: tagged(g.m, 0.0, "gauge_equivalence_solver"),
        phi,
        psi,
        l1_table: None,
        l1_max_abs: None,
    }
}

/// `Some(witness)` if the long-range parts differ.
fn compare_transversal(
    c1: &PotentialConfig,
    c2: &PotentialConfig,
    tol: &Tolerances,
    stage: &mut Stage,
) -> Result<Option<WitnessReport>> {
    let fail = |stage: &mut Stage, quantity: &str, key: &str| {
        stage.note = Some(format!("{quantity} differs"));
        Some(WitnessReport::Transversal {
            quantity: quantity.into(),
            difference: stage.numbers[key].clone(),
        })
    };
    match (&c1.transversal, &c2.transversal) {
        (TransversalField::Planar { .. }, TransversalField::Planar { .. }) => {
            let d1 = decompose_transversal(&c1.transversal, tol.mean).stage("transversal")?;
            let d2 = decompose_transversal(&c2.transversal, tol.mean).stage("transversal")?;
            if !stage.check(
                "alpha",
                (d1.alpha - d2.alpha).abs(),
                tol.phase_fit,
                "decompose_transversal",
            ) {
                return Ok(fail(stage, "flux", "alpha"));
            }
            let da0 = d1.a0.max_difference(&d2.a0, 720);
            if !stage.check("a0", da0, tol.phase_fit, "decompose_transversal") {
                return Ok(fail(stage, "angular potential", "a0"));
            }
        }
        (
            TransversalField::Spatial {
                swirl: s1,
                gradient: g1,
            },
            TransversalField::Spatial {
                swirl: s2,
                gradient: g2,
            },
        ) => {
            if !stage.check(
                "swirl",
                norm(&sub(s1, s2)),
                tol.phase_fit,
                "transversal swirl",
            ) {
                return Ok(fail(stage, "swirl", "swirl"));
            }
            let dpsi = match (g1, g2) {
                (Some(a), Some(b)) => a.sub(b).stage("transversal")?.max_abs(),
                (Some(a), None) | (None, Some(a)) => a.max_abs(),
                (None, None) => 0.0,
            };
            if !stage.check("psi", dpsi, tol.phase_fit, "transversal gradient phase") {
                return Ok(fail(stage, "gradient phase", "psi"));
            }
        }
        _ => {
            return Err(Error::Scenario(
                "configurations of different dimension".into(),
            ))
        }
    }
    Ok(None)
}

/// `a - b` with the combined envelope.
fn difference(a: &ShortRangeField, b: &ShortRangeField) -> ShortRangeField {
    let field = match (a.field.is_zero(), b.field.is_zero()) {
        (true, true) => VectorField::Zero,
        (false, true) => a.field.clone(),
        (true, false) => b.field.clone().scaled(-1.0),
        (false, false) => a.field.clone().sum(b.field.clone().scaled(-1.0)),
    };
    let envelope = match (a.envelope, b.envelope) {
        (Some(x), Some(y)) => Some(x.combine(&y)),
        (x, None) if b.field.is_zero() => x,
        (None, y) if a.field.is_zero() => y,
        _ => None,
    };
    ShortRangeField { field, envelope }
}

/// `L1` on a square grid (the plane `x3 = 0` in space), blank outside the annulus.
fn gauge_scalar_table(l: &GaugeScalar, region: &Annulus) -> Table {
    let n = 41;
    let h = 2.0 * region.outer / (n - 1) as f64;
    let mut t = Table::new("gauge_l1", &["x1", "x2", "L1"]);
    for j in 0..n {
        for i in 0..n {
            let x = [
                -region.outer + h * i as f64,
                -region.outer + h * j as f64,
                0.0,
            ];
            let v = if region.contains(&x) {
                l.eval(&x)
            } else {
                f64::NAN
            };
            t.rows.push(vec![x[0], x[1], v]);
        }
    }
    t
}

/// Random line at distance `[p_min, p_max]` from the origin.
fn random_line(rng: &mut ChaCha8Rng, dim: Dim, p_min: f64, p_max: f64) -> Result<Line> {
    let p = rng.gen_range(p_min..p_max);
    match dim {
        Dim::Two => {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            Ok(Line::planar(rng.gen_range(0.0..TAU), sign * p))
        }
        Dim::Three => {
            let omega = random_unit(rng);
            let v = random_unit(rng);
            let u = sub(&v, &scale(dot(&v, &omega), &omega));
            let u = if norm(&u) < 1e-3 {
                abgauge_core::geom::orthogonal_unit(&omega)
            } else {
                normalize(&u)
            };
            Ok(Line::new(scale(p, &u), omega, Dim::Three)?)
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let a: f64 = rng.gen_range(0.0..TAU);
    let s = (1.0 - z * z).sqrt();
    [s * a.cos(), s * a.sin(), z]
}

/// Compares scalar X-ray transforms on seeded random lines and `V` pointwise;
/// returns the worst line as a witness.
fn compare_scalars(
    c1: &PotentialConfig,
    c2: &PotentialConfig,
    input: &ClassifyInput,
    stage: &mut Stage,
) -> Result<WitnessReport> {
    let r = c1.obstacle_radius;
    let mut rng = ChaCha8Rng::seed_from_u64(input.seed);
    let mut worst = (f64::NEG_INFINITY, None);
    for _ in 0..input.probe_lines.max(1) {
        let line = random_line(&mut rng, c1.dim, INNER_MARGIN * r, 0.5 * input.outer_radius)?;
        let i1 = line_integral_scalar(&c1.scalar, &line, r, input.tol.tail).stage("scalar")?;
        let i2 = line_integral_scalar(&c2.scalar, &line, r, input.tol.tail).stage("scalar")?;
        let d = (i1 - i2).abs();
        if d > worst.0 {
            worst = (d, Some((line, i1, i2)));
        }
    }
    let (line, first, second) = worst.1.expect("at least one probe line");
    stage.check(
        "transform_difference",
        worst.0,
        input.ptol.scalar,
        "line_integral_scalar on seeded lines",
    );
    let pointwise = c1
        .sample_points(INNER_MARGIN * r, input.outer_radius, 400)
        .iter()
        .map(|x| (c1.scalar_potential(x) - c2.scalar_potential(x)).abs())
        .fold(0.0, f64::max);
    stage.check(
        "pointwise_difference",
        pointwise,
        input.ptol.scalar,
        "scalar potential at quasi-random points",
    );
    Ok(WitnessReport::ScalarTransform {
        x0: line.x0(),
        omega: line.omega(),
        first,
        second,
        difference: tagged(worst.0, input.ptol.scalar, "line_integral_scalar"),
    })
}

fn kernel_tables(k1: &ScatteringKernel, k2: &ScatteringKernel) -> Table {
    // S(theta, theta_0) along the first column, diagonal blanked
    let mut t = Table::new("kernel_slice", &["theta", "re_1", "im_1", "re_2", "im_2"]);
    let (g1, g2) = (k1.grid_values(), k2.grid_values());
    let m = k1.grid_size();
    for i in 0..m {
        let (a, b) = (
            g1[i * m],
            g2.get(i * k2.grid_size()).copied().unwrap_or_default(),
        );
        let row = if i == 0 {
            vec![k1.theta(i), f64::NAN, f64::NAN, f64::NAN, f64::NAN]
        } else {
            vec![k1.theta(i), a.re, a.im, b.re, b.im]
        };
        t.rows.push(row);
    }
    t
}

fn channel_table(k1: &ScatteringKernel, k2: &ScatteringKernel) -> Table {
    let mut t = Table::new("channels", &["k", "re_1", "im_1", "re_2", "im_2"]);
    let n = COMPARED_CHANNELS as i64;
    for k in -n..=n {
        let (a, b) = (k1.channel(k), k2.channel(k));
        t.rows.push(vec![k as f64, a.re, a.im, b.re, b.im]);
    }
    t
}

fn sphere_kernel_table(k1: &SphereKernel, k2: &SphereKernel) -> Table {
    let mut t = Table::new(
        "kernel_slice",
        &[
            "omega_1", "omega_2", "omega_3", "re_1", "im_1", "re_2", "im_2",
        ],
    );
    for i in 0..k1.len() {
        let w = k1.grid().node(i);
        let (a, b) = (k1.value(i, 0), k2.value(i.min(k2.len() - 1), 0));
        t.rows.push(vec![w[0], w[1], w[2], a.re, a.im, b.re, b.im]);
    }
    t
}

// ---- reconstruct ------------------------------------------------------------

/// Reconstruct scenario: forward-projects the first configuration and
/// recovers what the X-ray data determine, with errors against ground truth.
pub fn run_reconstruct(scenario: &Scenario) -> Result<Report> {
    if scenario.kind != ScenarioKind::Reconstruct {
        return Err(Error::Scenario(
            "run_reconstruct needs a reconstruct scenario".into(),
        ));
    }
    let configs = scenario.resolve_configs()?;
    let c = &configs[0].config;
    let (tol, ptol) = scenario.tolerances();
    let r = c.obstacle_radius;
    let g = &scenario.geometry;
    let geometry = SinogramGeometry::new(g.angles, g.offsets, g.p_max.unwrap_or(3.0 * r), r)
        .stage("forward")?;
    let mut report = Report {
        kind: Some(ScenarioKind::Reconstruct),
        name: scenario.name.clone(),
        seed: scenario.seed,
        regime: regime(&[c]),
        provenance: vec![
            "X-ray data synthesized by forward projection of the configuration".into(),
        ],
        caveats: vec![DECAY_NOTE.into()],
        ..Report::default()
    };
    let options = RadonOptions::default();

    // forward projection
    let mut stage = Stage::new("forward");
    let lines = geometry.lines();
    let scalar: Vec<f64> = lines
        .iter()
        .map(|l| line_integral_scalar(&c.scalar, l, r, tol.tail))
        .collect::<abgauge_core::Result<_>>()
        .stage("forward")?;
    let sdata = XRayData::new(
        lines.clone(),
        XRayValues::Real(scalar),
        XRayComponent::Scalar,
    )
    .stage("forward")?;
    let ssino = Sinogram::from_xray(geometry, &sdata).stage("forward")?;
    report.add_table(sinogram_table("sinogram_scalar", &ssino));
    report.add_table(sinogram_dense_table("sinogram_scalar_dense", &ssino));
    let vdata = if c.dim == Dim::Two {
        let values: Vec<f64> = lines
            .iter()
            .map(|l| line_integral_vector(c, l, tol.tail))
            .collect::<abgauge_core::Result<_>>()
            .stage("forward")?;
        let data = XRayData::new(
            lines.clone(),
            XRayValues::Real(values),
            XRayComponent::Vector,
        )
        .stage("forward")?;
        let vsino = Sinogram::from_xray(geometry, &data).stage("forward")?;
        report.add_table(sinogram_table("sinogram_vector", &vsino));
        report.add_table(sinogram_dense_table("sinogram_vector_dense", &vsino));
        Some(data)
    } else {
        None
    };
    stage.record("lines", lines.len() as f64, 0.0, "SinogramGeometry::lines");
    report.stages.push(stage);

    // flux from the constancy of the far-field integrals
    if c.dim == Dim::Two {
        let mut stage = Stage::new("flux");
        let truth = decompose_transversal(&c.transversal, tol.mean)
            .stage("flux")?
            .alpha;
        let (alpha, spread) = flux_from_xray(c, tol.tail)?;
        stage.check(
            "alpha_error",
            (alpha - truth).abs(),
            ptol.flux,
            "flux from far-field line integrals vs decompose_transversal",
        );
        stage.record(
            "constancy_spread",
            spread,
            ptol.flux,
            "spread of direction-averaged integrals over distance, / pi",
        );
        report.alpha.push(tagged(
            alpha,
            ptol.flux,
            "flux from far-field line integrals",
        ));
        report.stages.push(stage);
    }

    // scalar potential (in space: on the plane x3 = 0)
    let mut stage = Stage::new("scalar_inversion");
    let rec = radon_invert_scalar(&sdata, &geometry, &options).stage("scalar_inversion")?;
    let v = |x: &Vec3| c.scalar_potential(x);
    record_error(
        &mut report,
        &mut stage,
        "v",
        &rec,
        &v,
        SCALAR_RECONSTRUCTION_TARGET,
        ptol.field,
    );
    report.add_table(reconstruction_table("v_reconstruction", &rec, &v));
    report.stages.push(stage);

    match vdata {
        Some(data) => {
            let mut stage = Stage::new("field_recovery");
            let rec = recover_field_2d(&data, &geometry, &options).stage("field_recovery")?;
            let b = |x: &Vec3| curl_at(c, x, Dim::Two, DEFAULT_CURL_STEP).planar();
            record_error(
                &mut report,
                &mut stage,
                "b",
                &rec,
                &b,
                FIELD_RECONSTRUCTION_TARGET,
                ptol.field,
            );
            report.add_table(reconstruction_table("b_reconstruction", &rec, &b));
            report.stages.push(stage);
        }
        None => {
            report
                .stages
                .push(plane_sweep(c, scenario, &ptol, &mut report.data)?);
            report.tables.push("plane_sweep.csv".into());
            let stage = leading_order(c, &tol, &mut report)?;
            report.stages.push(stage);
        }
    }
    Ok(report)
}

/// Relative L2 error against a nonzero truth, otherwise the largest
/// reconstructed magnitude against the absolute `floor`.
fn record_error<F: Fn(&Vec3) -> f64>(
    report: &mut Report,
    stage: &mut Stage,
    key: &str,
    rec: &Reconstruction,
    truth: &F,
    target: f64,
    floor: f64,
) {
    let scale = rec
        .annulus_samples()
        .map(|(x, _)| truth(&x).abs())
        .fold(0.0, f64::max);
    let (name, value, tolerance, op) = if scale > floor {
        (
            format!("{key}_relative_l2"),
            rec.relative_l2_error(truth),
            target,
            "relative L2 error over the certified annulus",
        )
    } else {
        (
            format!("{key}_max_abs"),
            rec.max_abs(),
            floor,
            "largest reconstructed magnitude (ground truth vanishes)",
        )
    };
    stage.check(&name, value, tolerance, op);
    report.metrics.insert(name, tagged(value, tolerance, op));
}

/// `(alpha, spread)` from `int A . omega ds = alpha pi + a0(w) - a0(-w) + O(p^{-eps0})`:
/// direction averages remove the antipodal term, extrapolation in
/// `p^{-eps0}` the short-range remainder.
pub fn flux_from_xray(c: &PotentialConfig, tail: f64) -> Result<(f64, f64)> {
    let r = c.obstacle_radius;
    let eps0 = c.short_range.envelope.map_or(1.0, |e| e.eps0);
    let mut xs = Vec::with_capacity(FLUX_DISTANCES);
    let mut means = Vec::with_capacity(FLUX_DISTANCES);
    for k in 0..FLUX_DISTANCES {
        let p = 4.0 * r * 2f64.powi(k as i32);
        let mut sum = 0.0;
        for j in 0..FLUX_DIRECTIONS {
            let line = Line::planar(TAU * j as f64 / FLUX_DIRECTIONS as f64, p);
            sum += line_integral_vector(c, &line, tail).stage("flux")?;
        }
        xs.push(p.powf(-eps0));
        means.push(sum / (FLUX_DIRECTIONS as f64 * PI));
    }
    let (lo, hi) = means
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
    Ok((neville_at_zero(&xs, &means), hi - lo))
}

fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    for m in 1..xs.len() {
        for i in 0..xs.len() - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

fn sinogram_table(name: &str, s: &Sinogram) -> Table {
    let g = s.geometry();
    let mut t = Table::new(name, &["theta", "p", "measured", "value"]);
    for i in 0..g.angles {
        for j in 0..g.offsets {
            t.rows.push(vec![
                g.theta(i),
                g.offset(j),
                if g.is_measured(j) { 1.0 } else { 0.0 },
                s.value(i, j),
            ]);
        }
    }
    t
}

fn sinogram_dense_table(name: &str, s: &Sinogram) -> Table {
    let g = s.geometry();
    let mut header = vec!["theta".to_string()];
    header.extend((0..g.offsets).map(|j| format!("p={}", g.offset(j))));
    let mut t = Table {
        name: name.into(),
        header,
        rows: Vec::new(),
    };
    for i in 0..g.angles {
        let mut row = vec![g.theta(i)];
        row.extend((0..g.offsets).map(|j| s.value(i, j)));
        t.rows.push(row);
    }
    t
}

fn reconstruction_table<F: Fn(&Vec3) -> f64>(name: &str, rec: &Reconstruction, truth: &F) -> Table {
    let mut t = Table::new(name, &["x1", "x2", "value", "truth"]);
    for (x, v) in rec.field.samples() {
        let inside = rec.in_annulus(&x);
        t.rows.push(vec![
            x[0],
            x[1],
            if inside { v[0] } else { f64::NAN },
            if inside { truth(&x) } else { f64::NAN },
        ]);
    }
    t
}

/// `B` restricted to seeded random planes outside the obstacle.
fn plane_sweep(
    c: &PotentialConfig,
    scenario: &Scenario,
    ptol: &PipelineTolerances,
    tables: &mut Vec<Table>,
) -> Result<Stage> {
    let r = c.obstacle_radius;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut stage = Stage::new("plane_sweep");
    let mut t = Table::new("plane_sweep", &["n1", "n2", "n3", "offset", "max_abs_b"]);
    let mut worst: f64 = 0.0;
    for _ in 0..scenario.geometry.planes {
        let normal = random_unit(&mut rng);
        let offset = rng.gen_range(1.5 * r..3.0 * r);
        let plane = Plane::with_normal(normal, offset).stage("plane_sweep")?;
        let b = plane_restrict_curl(c, &plane, r, 21, 2.0 * r, DEFAULT_CURL_STEP)
            .stage("plane_sweep")?;
        let m = b.data().iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        worst = worst.max(m);
        t.rows
            .push(vec![normal[0], normal[1], normal[2], offset, m]);
    }
    tables.push(t);
    stage.record(
        "max_plane_field",
        worst,
        ptol.field,
        "plane_restrict_curl over seeded planes",
    );
    Ok(stage)
}

/// Leading order `b(x/|x|) = lim |x|^2 B(x)` of each component.
fn leading_order(c: &PotentialConfig, tol: &Tolerances, report: &mut Report) -> Result<Stage> {
    let r = c.obstacle_radius;
    let mut stage = Stage::new("leading_order");
    let grid = Arc::new(SphereGrid::icosahedral(2));
    let radii: Vec<f64> = [50.0, 100.0, 200.0, 400.0].iter().map(|s| s * r).collect();
    let forms = RadialSamples::sample_two_form(c, grid.clone(), &radii, DEFAULT_CURL_STEP);
    let mut limits = Vec::with_capacity(3);
    for (i, f) in forms.iter().enumerate() {
        match extract_leading_order(f, tol.leading_order) {
            Ok(b) => {
                stage.record(
                    &format!("max_abs_b{i}"),
                    b.max_abs(),
                    tol.leading_order,
                    "extract_leading_order",
                );
                limits.push(b);
            }
            Err(e) => {
                stage.fail(format!("component {i}: {e}"));
                return Ok(stage);
            }
        }
    }
    let mut t = Table::new(
        "leading_order",
        &["omega_1", "omega_2", "omega_3", "b_23", "b_31", "b_12"],
    );
    for (i, w) in grid.nodes().iter().enumerate() {
        t.rows.push(vec![
            w[0],
            w[1],
            w[2],
            limits[0].value_at(i),
            limits[1].value_at(i),
            limits[2].value_at(i),
        ]);
    }
    report.add_table(t);
    Ok(stage)
}

// ---- kernel lab -------------------------------------------------------------

/// Kernel lab: builds the model kernels of the configurations, tabulates
/// slices and channels, and runs the solver when there are two.
pub fn run_kernel_lab(scenario: &Scenario) -> Result<Report> {
    if scenario.kind != ScenarioKind::KernelLab {
        return Err(Error::Scenario(
            "run_kernel_lab needs a kernel-lab scenario".into(),
        ));
    }
    let configs = scenario.resolve_configs()?;
    let (tol, _) = scenario.tolerances();
    let c1 = &configs[0].config;
    let mut report = Report {
        kind: Some(ScenarioKind::KernelLab),
        name: scenario.name.clone(),
        seed: scenario.seed,
        regime: regime(&configs.iter().map(|c| &c.config).collect::<Vec<_>>()),
        ..Report::default()
    };
    let pair = if configs.len() >= 2 {
        let (pair, provenance) = build_kernels(scenario, &configs, &tol)?;
        report.provenance = provenance;
        pair
    } else {
        report.provenance = vec![format!("kernel: {MODEL_NOTE}")];
        match c1.dim {
            Dim::Two => {
                let k = planar_model_kernel(c1, &scenario.kernel, &tol)?;
                KernelPair::Planar(k.clone(), k)
            }
            Dim::Three => {
                let k = sphere_model_kernel(c1, &scenario.kernel)?;
                KernelPair::Sphere(k.clone(), k)
            }
        }
    };
    let mut stage = Stage::new("kernels");
    match &pair {
        KernelPair::Planar(k1, k2) => {
            stage.record(
                "singular_strength",
                k1.singular_strength(),
                tol.kernel,
                "sin(b pi)/pi of the reduced flux",
            );
            stage.record(
                "remainder_bound_ratio",
                k1.remainder().bound_ratio(),
                1.0,
                "Remainder::bound_ratio",
            );
            report
                .alpha
                .push(tagged(k1.effective_flux(), tol.mean, "kernel flux"));
            if configs.len() >= 2 {
                report
                    .alpha
                    .push(tagged(k2.effective_flux(), tol.mean, "kernel flux"));
            }
            report.add_table(kernel_tables(k1, k2));
            report.add_table(channel_table(k1, k2));
        }
        KernelPair::Sphere(k1, k2) => report.add_table(sphere_kernel_table(k1, k2)),
    }
    report.stages.push(stage);
    if configs.len() >= 2 {
        let mut stage = Stage::new("solver");
        let outcome = match &pair {
            KernelPair::Planar(k1, k2) => gauge_equivalence_solver(k1, k2, &tol),
            KernelPair::Sphere(k1, k2) => gauge_equivalence_solver_sphere(k1, k2, &tol),
        }
        .stage("solver")?;
        report.verdict = Some(match outcome {
            SolverOutcome::Equivalent {
                gauge, residual, ..
            } => {
                stage.check(
                    "residual",
                    residual,
                    tol.kernel,
                    "kernel distance after the recovered gauge",
                );
                report.gauge = Some(gauge_report(&gauge, &tol));
                Verdict::Equivalent
            }
            SolverOutcome::NotEquivalent { witness } => {
                report.witness = Some(kernel_witness(&witness, &tol));
                Verdict::NotEquivalent
            }
            SolverOutcome::Ambiguous { reason } => {
                report.caveats.push(reason);
                Verdict::Ambiguous
            }
        });
        report.stages.push(stage);
    }
    Ok(report)
}
