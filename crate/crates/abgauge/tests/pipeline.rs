use std::path::PathBuf;
use std::process::Command;

use abgauge::report::{Status, WitnessReport, REPORT_SCHEMA};
use abgauge::{emit_report, run, Report, ReportFormat, Scenario, ScenarioKind, Verdict};
use serde_json::{json, Value};

fn scenario_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn planar(flux: f64) -> Value {
    json!({
        "dimension": 2,
        "R": 1.0,
        "flux_profile": [[0, flux, 0.0], [1, 0.1, -0.05]],
        "scalar": { "kind": "gaussian_ring", "params": { "amp": 1.0, "radius": 1.5, "width": 0.2 }, "C": 5, "eps0": 1 }
    })
}

fn scenario(kind: &str, configs: Vec<Value>, extra: Value) -> Scenario {
    let mut s =
        json!({ "schema": "abgauge-scenario/1", "kind": kind, "seed": 5, "configs": configs });
    if let (Some(s), Some(extra)) = (s.as_object_mut(), extra.as_object()) {
        s.extend(extra.clone());
    }
    Scenario::from_json(&s.to_string()).unwrap()
}

fn gauged(m: i64) -> Value {
    json!({ "gauge_of": 0, "gauge": { "m": m, "phi": [[1, 0.1, 0.2]] } })
}

#[test]
fn identical_configurations_are_equivalent() {
    let r = run(&scenario(
        "classify",
        vec![planar(0.3), planar(0.3)],
        json!({}),
    ))
    .unwrap();
    assert_eq!(r.verdict, Some(Verdict::Equivalent));
    assert_eq!(r.gauge.as_ref().unwrap().m.value, 0);
    assert!(!r.caveats.iter().any(|c| c.contains("identity is used")));
    assert!(r.caveats.iter().any(|c| c.contains("decay envelopes")));
    assert!(r.stages.iter().all(|s| s.status == Status::Passed));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn identical_kernels_with_integer_flux_carry_a_caveat() {
    let r = run(&scenario(
        "classify",
        vec![planar(1.0), planar(1.0)],
        json!({}),
    ))
    .unwrap();
    assert_eq!(r.verdict, Some(Verdict::Equivalent));
    assert!(
        r.caveats.iter().any(|c| c.contains("identity is used")),
        "{:?}",
        r.caveats
    );
}

#[test]
fn integer_flux_with_a_gauge_is_ambiguous() {
    let r = run(&scenario(
        "classify",
        vec![planar(1.0), gauged(1)],
        json!({}),
    ))
    .unwrap();
    assert_eq!(r.verdict, Some(Verdict::Ambiguous));
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn flux_mismatch_is_not_equivalent() {
    let r = run(&scenario(
        "classify",
        vec![planar(0.3), planar(0.45)],
        json!({}),
    ))
    .unwrap();
    assert_eq!(r.verdict, Some(Verdict::NotEquivalent));
    assert!(matches!(
        r.witness,
        Some(WitnessReport::Channel { .. }) | Some(WitnessReport::Kernel { .. })
    ));
}

#[test]
fn magnetic_difference_is_witnessed() {
    let mut second = planar(0.3);
    second["short_range"] = json!({ "kind": "ring_vortex", "params": { "amp": 0.2, "radius": 2.0, "width": 0.3 }, "C": 5, "eps0": 1 });
    let r = run(&scenario("classify", vec![planar(0.3), second], json!({}))).unwrap();
    assert_eq!(r.verdict, Some(Verdict::NotEquivalent));
    assert!(
        matches!(r.witness, Some(WitnessReport::MagneticField { .. })),
        "{:?}",
        r.witness
    );
}

#[test]
fn verdicts_are_symmetric() {
    let mut bumped = planar(0.3);
    bumped["scalar"]["params"]["amp"] = json!(1.1);
    for (a, b) in [
        (planar(0.3), planar(0.45)),
        (planar(0.3), bumped),
        (planar(0.3), planar(0.3)),
    ] {
        let forward = run(&scenario("classify", vec![a.clone(), b.clone()], json!({}))).unwrap();
        let backward = run(&scenario("classify", vec![b, a], json!({}))).unwrap();
        assert_eq!(forward.verdict, backward.verdict);
    }
}

#[test]
fn non_convex_obstacles_are_labelled() {
    let mut c = planar(0.3);
    c["convex"] = json!(false);
    let r = run(&scenario("classify", vec![c.clone(), c], json!({}))).unwrap();
    assert!(r.regime.contains("outside proven regime"), "{}", r.regime);
    let r = run(&scenario(
        "classify",
        vec![planar(0.3), planar(0.3)],
        json!({}),
    ))
    .unwrap();
    assert!(r.regime.starts_with("proven regime"));
}

#[test]
fn spatial_gauges_are_recovered() {
    let r = run(&Scenario::load(&scenario_file("classify_spatial.json")).unwrap()).unwrap();
    assert_eq!(r.verdict, Some(Verdict::Equivalent));
    assert!(r.gauge.unwrap().psi.is_some());
}

#[test]
fn zero_potential_reconstructs_to_zero() {
    let zero = json!({ "dimension": 2, "R": 1.0 });
    let geometry = json!({ "geometry": { "angles": 32, "offsets": 64, "probe_lines": 16 } });
    let r = run(&scenario("reconstruct", vec![zero], geometry)).unwrap();
    assert!(
        r.stages.iter().all(|s| s.status != Status::Failed),
        "{:?}",
        r.stages
    );
    assert!(
        r.metrics.values().all(|m| m.value.abs() < 1e-12),
        "{:?}",
        r.metrics
    );
    assert!(r.alpha.iter().all(|a| a.value.abs() < 1e-12));
}

#[test]
fn sinogram_tables_cover_every_line() {
    let geometry = json!({ "geometry": { "angles": 32, "offsets": 64, "probe_lines": 16 } });
    let r = run(&scenario("reconstruct", vec![planar(0.3)], geometry)).unwrap();
    for name in ["sinogram_scalar", "sinogram_vector"] {
        let long = r.data.iter().find(|t| t.name == name).expect(name);
        assert_eq!(long.rows.len(), 32 * 64);
    }
}

#[test]
fn reports_are_emitted_with_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&scenario(
        "classify",
        vec![planar(0.3), gauged(1)],
        json!({}),
    ))
    .unwrap();
    let files = emit_report(&r, dir.path(), ReportFormat::JsonAndCsv).unwrap();
    assert_eq!(files.len(), 1 + r.tables.len());
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back.schema, REPORT_SCHEMA);
    assert_eq!(back.verdict, r.verdict);
    for t in &r.tables {
        assert!(dir.path().join(t).exists(), "{t}");
    }
    let only = tempfile::tempdir().unwrap();
    assert_eq!(
        emit_report(&r, only.path(), ReportFormat::Json)
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn empty_report_serialises() {
    let v: Value = serde_json::to_value(Report::default()).unwrap();
    assert_eq!(v["schema"], REPORT_SCHEMA);
    assert!(v["verdict"].is_null());
    assert_eq!(v["stages"], json!([]));
}

#[test]
fn malformed_scenarios_are_rejected() {
    let bad_schema = json!({ "schema": "other/1", "kind": "classify", "seed": 0, "configs": [] });
    assert!(Scenario::from_json(&bad_schema.to_string()).is_err());
    let unknown = json!({ "schema": "abgauge-scenario/1", "kind": "classify", "seed": 0, "configs": [], "extra": 1 });
    assert!(Scenario::from_json(&unknown.to_string()).is_err());
    assert!(run(&scenario("classify", vec![planar(0.3)], json!({}))).is_err());
    let mut wider = planar(0.3);
    wider["R"] = json!(2.0);
    assert!(run(&scenario("classify", vec![planar(0.3), wider], json!({}))).is_err());
    let s = scenario("kernel-lab", vec![planar(0.3)], json!({}));
    assert_eq!(s.kind, ScenarioKind::KernelLab);
}

#[test]
fn command_line_classify_and_errors() {
    let bin = env!("CARGO_BIN_EXE_abgauge");
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin)
        .args([
            "classify",
            scenario_file("classify_bump.json").to_str().unwrap(),
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["verdict"], "not_equivalent");
    assert_eq!(r["witness"]["kind"], "scalar_transform");
    assert!(dir.path().join("report.json").exists());

    let out = Command::new(bin)
        .args(["classify", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
