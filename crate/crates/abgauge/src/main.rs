use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abgauge::core::fields::{decompose_transversal, flux, GaugeElement};
use abgauge::core::scattering::{
    apply_gauge_to_kernel, assemble_kernel, gauge_equivalence_solver, kernel_distance_parts,
    SolverOutcome,
};
use abgauge::core::tomography::{
    line_integral_scalar, line_integral_vector, radon_invert_scalar, recover_field_2d,
    RadonOptions, SinogramGeometry, XRayComponent, XRayData, XRayValues,
};
use abgauge::core::{Dim, Tolerances};
use abgauge::io::{self, Triple};
use abgauge::report::tagged;
use abgauge::scenario::{ConfigSpec, RemainderSpec};
use abgauge::{emit_report, Error, Report, ReportFormat, Result, Scenario, ScenarioKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Gauge equivalence of long-range magnetic potentials: transforms,
/// reconstructions and scattering-kernel classification.
#[derive(Parser)]
#[command(name = "abgauge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a planar profile into flux and angular potential.
    Decompose {
        /// Fourier triples `[[k, re, im], ...]`, inline or a file.
        #[arg(long)]
        profile: String,
    },
    /// Flux of a configuration through a circle.
    Flux {
        /// Configuration JSON, inline or a file.
        #[arg(long)]
        config: String,
        #[arg(long)]
        radius: f64,
    },
    /// Forward X-ray transform of a configuration on a sinogram geometry.
    Xray {
        #[arg(long)]
        config: String,
        #[arg(long, value_enum, default_value_t = Component::Vector)]
        component: Component,
        /// Store `exp(i integral)` instead of the integrals.
        #[arg(long)]
        unimodular: bool,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Filtered backprojection of X-ray data: `V` from scalar records, `B` from vector records.
    Radon {
        #[arg(long)]
        xray: PathBuf,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Obstacle radius.
        #[arg(long = "R")]
        radius: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Planar scattering kernels.
    Kernel {
        #[command(subcommand)]
        command: KernelCommand,
    },
    /// Run a classify scenario.
    Classify(RunArgs),
    /// Run a reconstruct scenario.
    Reconstruct(RunArgs),
    /// Run any scenario and write its report files.
    Report {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Skip the CSV tables.
        #[arg(long)]
        json_only: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Component {
    Scalar,
    Vector,
}

#[derive(Args)]
struct GeometryArgs {
    #[arg(long, default_value_t = 180)]
    angles: usize,
    #[arg(long, default_value_t = 256)]
    offsets: usize,
    /// Largest impact parameter (default `3 R`).
    #[arg(long)]
    p_max: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    scenario: PathBuf,
    /// Directory for the report files (default: the scenario's `outputs`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum KernelCommand {
    /// Model kernel of flux `alpha` with prefactor phase `phi`.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Fourier triples of the prefactor phase, inline or a file.
        #[arg(long, default_value = "[]")]
        phi_coeffs: String,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Remainder JSON (`{"kind": "zero"}` or `{"kind": "gaussian_bump", ...}`); default bump.
        #[arg(long)]
        remainder: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply the gauge `(m, phi)` to a kernel.
    Gauge {
        kernel: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value = "[]")]
        phi_coeffs: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Distance between two kernels.
    Compare { first: PathBuf, second: PathBuf },
    /// Recover the gauge relating two kernels.
    Solve { first: PathBuf, second: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn print(value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|e| Error::io("<stdout>", e))
}

fn geometry(args: &GeometryArgs, r: f64) -> Result<SinogramGeometry> {
    Ok(SinogramGeometry::new(
        args.angles,
        args.offsets,
        args.p_max.unwrap_or(3.0 * r),
        r,
    )?)
}

fn run(cli: Cli) -> Result<u8> {
    let tol = Tolerances::default();
    match cli.command {
        Command::Decompose { profile } => {
            let triples: Vec<Triple> = io::inline_or_file(&profile)?;
            let a = io::angular_from_triples(&triples)?;
            let d = decompose_transversal(
                &abgauge::core::fields::TransversalField::planar(a),
                tol.mean,
            )?;
            print(&json!({
                "alpha": tagged(d.alpha, tol.mean, "decompose_transversal"),
                "a0": tagged(io::angular_to_triples(&d.a0), tol.mean, "decompose_transversal"),
            }))?;
        }
        Command::Flux { config, radius } => {
            let cfg = io::inline_or_file::<ConfigSpec>(&config)?.build()?;
            print(&json!({ "flux": tagged(flux(&cfg, radius)?, tol.loop_integral, "flux") }))?;
        }
        Command::Xray {
            config,
            component,
            unimodular,
            geometry: g,
            out,
        } => {
            let cfg = io::inline_or_file::<ConfigSpec>(&config)?.build()?;
            let geometry = geometry(&g, cfg.obstacle_radius)?;
            let lines = geometry.lines();
            let values: Vec<f64> = match component {
                Component::Scalar => lines
                    .iter()
                    .map(|l| line_integral_scalar(&cfg.scalar, l, cfg.obstacle_radius, tol.tail))
                    .collect::<abgauge::core::Result<_>>()?,
                Component::Vector => {
                    if cfg.dim != Dim::Two {
                        return Err(Error::Scenario("vector sinograms are planar".into()));
                    }
                    lines
                        .iter()
                        .map(|l| line_integral_vector(&cfg, l, tol.tail))
                        .collect::<abgauge::core::Result<_>>()?
                }
            };
            let data = match (component, unimodular) {
                (Component::Vector, true) => XRayData::exponentiated(lines, &values)?,
                (Component::Scalar, true) => {
                    return Err(Error::Scenario("only vector data are exponentiated".into()))
                }
                (c, false) => {
                    let c = match c {
                        Component::Scalar => XRayComponent::Scalar,
                        Component::Vector => XRayComponent::Vector,
                    };
                    XRayData::new(lines, XRayValues::Real(values), c)?
                }
            };
            let mut w = io::create(&out)?;
            io::write_xray(&mut w, &data)?;
        }
        Command::Radon {
            xray,
            geometry: g,
            radius,
            out,
        } => {
            let data = io::read_xray(io::open(&xray)?)?;
            let geometry = geometry(&g, radius)?;
            let rec = match data.component {
                XRayComponent::Scalar => {
                    radon_invert_scalar(&data, &geometry, &RadonOptions::default())?
                }
                XRayComponent::Vector => {
                    recover_field_2d(&data, &geometry, &RadonOptions::default())?
                }
            };
            let mut w = io::create(&out)?;
            io::write_grid(&mut w, &rec.field)?;
            print(&json!({
                "max_abs": tagged(rec.max_abs(), 0.0, "reconstruction over the certified annulus"),
                "inner_radius": rec.inner_radius,
                "outer_radius": rec.outer_radius,
                "completion_order": rec.completion_order,
            }))?;
        }
        Command::Kernel { command } => return kernel(command, &tol),
        Command::Classify(args) => return scenario_run(&args, ScenarioKind::Classify),
        Command::Reconstruct(args) => return scenario_run(&args, ScenarioKind::Reconstruct),
        Command::Report {
            scenario,
            out,
            json_only,
        } => {
            let s = Scenario::load(&scenario)?;
            let report = abgauge::run(&s)?;
            let format = if json_only {
                ReportFormat::Json
            } else {
                ReportFormat::JsonAndCsv
            };
            let files = emit_report(&report, &out, format)?;
            print(&json!({ "verdict": report.verdict, "files": files }))?;
            return Ok(report.exit_code() as u8);
        }
    }
    Ok(0)
}

fn scenario_run(args: &RunArgs, kind: ScenarioKind) -> Result<u8> {
    let s = Scenario::load(&args.scenario)?;
    if s.kind != kind {
        return Err(Error::Scenario(format!(
            "{} holds a {:?} scenario",
            args.scenario.display(),
            s.kind
        )));
    }
    let report: Report = abgauge::run(&s)?;
    if let Some(dir) = args.out.as_deref().or(s.outputs.as_deref()) {
        emit_report(&report, dir, ReportFormat::JsonAndCsv)?;
    }
    print(&serde_json::to_value(&report)?)?;
    Ok(report.exit_code() as u8)
}

fn phase(arg: &str) -> Result<abgauge::core::angular::AngularFunction> {
    let triples: Vec<Triple> = io::inline_or_file(arg)?;
    io::angular_from_triples(&triples)
}

fn kernel(command: KernelCommand, tol: &Tolerances) -> Result<u8> {
    match command {
        KernelCommand::Build {
            alpha,
            phi_coeffs,
            grid,
            lambda,
            remainder,
            out,
        } => {
            let phi = phase(&phi_coeffs)?;
            let spec: RemainderSpec = match remainder {
                Some(r) => io::inline_or_file(&r)?,
                None => RemainderSpec::default(),
            };
            let k = assemble_kernel(alpha, phi.clone(), phi, spec.build(grid)?, lambda)?;
            io::write_kernel(&out, &k)?;
        }
        KernelCommand::Gauge {
            kernel,
            m,
            phi_coeffs,
            out,
        } => {
            let k = io::read_kernel(&kernel)?;
            let g = GaugeElement::planar(m, phase(&phi_coeffs)?, tol.mean)?;
            io::write_kernel(&out, &apply_gauge_to_kernel(&k, &g)?)?;
        }
        KernelCommand::Compare { first, second } => {
            let (a, b) = (io::read_kernel(&first)?, io::read_kernel(&second)?);
            let d = kernel_distance_parts(&a, &b)?;
            print(&json!({
                "distance": tagged(d.total(), tol.kernel, "kernel_distance"),
                "grid": { "value": d.grid, "at": [d.at.0, d.at.1] },
                "channels": { "value": d.channels, "k": d.channel },
            }))?;
        }
        KernelCommand::Solve { first, second } => return solve(&first, &second, tol),
    }
    Ok(0)
}

fn solve(first: &Path, second: &Path, tol: &Tolerances) -> Result<u8> {
    let (a, b) = (io::read_kernel(first)?, io::read_kernel(second)?);
    match gauge_equivalence_solver(&a, &b, tol)? {
        SolverOutcome::Equivalent {
            gauge, residual, ..
        } => {
            let phi = match &gauge.phase {
                abgauge::core::fields::Phase::Circle(f) => io::significant_triples(f),
                abgauge::core::fields::Phase::Sphere(_) => Vec::new(),
            };
            print(&json!({
                "verdict": "equivalent",
                "m": tagged(gauge.m, 0.0, "gauge_equivalence_solver"),
                "phi": tagged(phi, tol.phase_fit, "gauge_equivalence_solver"),
                "residual": tagged(residual, tol.kernel, "kernel distance after the recovered gauge"),
            }))?;
            Ok(0)
        }
        SolverOutcome::NotEquivalent { witness } => {
            print(&json!({ "verdict": "not_equivalent", "witness": format!("{witness:?}") }))?;
            Ok(0)
        }
        SolverOutcome::Ambiguous { reason } => {
            print(&json!({ "verdict": "ambiguous", "reason": reason }))?;
            Ok(2)
        }
    }
}
