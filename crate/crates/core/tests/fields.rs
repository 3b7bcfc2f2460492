use std::f64::consts::TAU;
use std::sync::Arc;

use abgauge_core::angular::{AngularFunction, SphereGrid};
use abgauge_core::fields::{
    apply_gauge_to_potential, config_curl, curl, decompose_transversal, extract_leading_order, flux, Envelope,
    GaugeElement, PotentialConfig, RadialSamples, ScalarField, ScalarKind, ShortRangeField, TransversalField,
    VectorField, VectorKind,
};
use abgauge_core::geom::{norm, sub, Dim, Vec3};
use abgauge_core::sampling::shell_points;
use proptest::prelude::*;

fn profile(alpha: f64, terms: &[(f64, f64)]) -> AngularFunction {
    let t: Vec<_> = terms.iter().enumerate().map(|(i, &(a, b))| (i + 1, a, b)).collect();
    AngularFunction::from_cos_sin(16, alpha, &t).unwrap()
}

fn planar(alpha: f64, terms: &[(f64, f64)]) -> PotentialConfig {
    PotentialConfig { transversal: TransversalField::planar(profile(alpha, terms)), ..PotentialConfig::aharonov_bohm(1.0, 0.0) }
}

fn terms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 0..=16)
}

fn phase() -> impl Strategy<Value = AngularFunction> {
    prop::collection::vec((-0.5..0.5f64, -0.5..0.5f64), 1..=8).prop_map(|t| {
        let t: Vec<_> = t.iter().enumerate().map(|(i, &(a, b))| (i + 1, a, b)).collect();
        AngularFunction::from_cos_sin(8, 0.0, &t).unwrap()
    })
}

/// `|A - A'| |x| / max |a_hat|`: the error measured on the scale of the profile.
fn scaled_error(a: &TransversalField, x: &Vec3, other: Vec3, peak: f64) -> f64 {
    norm(&sub(&a.eval(x), &other)) * norm(x) / peak
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_reassembles_the_field(alpha in -3.0..3.0f64, t in terms()) {
        let p = profile(alpha, &t);
        let peak = (0..720).map(|j| p.eval(TAU * j as f64 / 720.0).abs()).fold(1e-300, f64::max);
        let field = TransversalField::planar(p);
        let d = decompose_transversal(&field, 1e-10).unwrap();
        prop_assert!(d.a0.mean().abs() < 1e-14);
        for x in shell_points(Dim::Two, 1.0, 100.0, 300) {
            prop_assert!(scaled_error(&field, &x, d.reassemble(&x), peak) < 1e-9);
        }
    }

    #[test]
    fn flux_does_not_depend_on_the_circle(alpha in -3.0..3.0f64, t in terms(), r1 in 1.1..50.0f64, r2 in 1.1..50.0f64) {
        let cfg = planar(alpha, &t);
        let (f1, f2) = (flux(&cfg, r1).unwrap(), flux(&cfg, r2).unwrap());
        prop_assert!((f1 - f2).abs() < 1e-11);
        prop_assert!((f1 - alpha).abs() < 1e-11);
    }

    #[test]
    fn winding_adds_integer_flux(alpha in -2.0..2.0f64, t in terms(), m in -3i64..=3, phi in phase()) {
        let cfg = planar(alpha, &t);
        let g = GaugeElement::planar(m, phi, 1e-10).unwrap();
        let moved = apply_gauge_to_potential(&cfg, &g).unwrap();
        prop_assert!((flux(&moved, 2.5).unwrap() - flux(&cfg, 2.5).unwrap() - m as f64).abs() < 1e-11);
    }

    #[test]
    fn magnetic_field_is_gauge_invariant(m in -3i64..=3, phi in phase(), amp in 0.1..2.0f64) {
        let cfg = PotentialConfig {
            short_range: ShortRangeField::new(
                VectorField::Analytic(VectorKind::RingVortex { amp, radius: 2.0, width: 0.4 }),
                Envelope::new(10.0, 1.0),
            ),
            ..planar(0.3, &[(0.2, -0.1)])
        };
        let l = ScalarField::Analytic(ScalarKind::GaussianBump { amp: 0.5, center: [2.0, 1.0, 0.0], width: 0.6 });
        let g = GaugeElement::planar(m, phi, 1e-10).unwrap().with_short_range(l, Envelope::new(10.0, 1.0));
        let moved = apply_gauge_to_potential(&cfg, &g).unwrap();
        let points = shell_points(Dim::Two, 1.2, 5.0, 40);
        let (b, b2) = (config_curl(&cfg, &points, 1e-3).unwrap(), config_curl(&moved, &points, 1e-3).unwrap());
        for (u, v) in b.iter().zip(&b2) {
            prop_assert!((u.planar() - v.planar()).abs() < 1e-6);
        }
    }

    #[test]
    fn transversal_fields_are_transversal(alpha in -3.0..3.0f64, t in terms()) {
        let field = TransversalField::planar(profile(alpha, &t));
        let points = shell_points(Dim::Two, 1.0, 100.0, 200);
        prop_assert!(field.transversality_defect(&points) < 1e-13 * (1.0 + alpha.abs() + t.len() as f64));
        // homogeneity of degree -1
        for x in &points[..20] {
            let s = 3.7;
            let y = [s * x[0], s * x[1], 0.0];
            let (a, b) = (field.eval(x), field.eval(&y));
            prop_assert!(norm(&sub(&a, &[s * b[0], s * b[1], 0.0])) < 1e-13 * norm(&a).max(1.0 / norm(x)));
        }
    }
}

#[test]
fn ab_flux_examples() {
    let cfg = PotentialConfig::aharonov_bohm(1.0, 0.5);
    assert!((flux(&cfg, 3.0).unwrap() - 0.5).abs() < 1e-12);
    assert!(flux(&cfg, 0.5).is_err());
    let gradient = planar(0.0, &[(0.0, 0.0), (0.4, 0.3)]);
    assert!(flux(&gradient, 2.0).unwrap().abs() < 1e-14);
}

#[test]
fn short_range_tail_flux_converges_like_one_over_r() {
    // A1 = c x^perp / <x>^3 carries circulation 2 pi c r^2 / <r>^3 -> 0
    let cfg = PotentialConfig {
        short_range: ShortRangeField::new(
            VectorField::custom(|x: &Vec3| {
                let b = (1.0 + x[0] * x[0] + x[1] * x[1]).powf(1.5);
                [-x[1] / b, x[0] / b, 0.0]
            }),
            Envelope::new(1.0, 1.0),
        ),
        ..PotentialConfig::aharonov_bohm(1.0, 0.5)
    };
    let errors: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|&r| flux(&cfg, r).unwrap() - 0.5).collect();
    for (e, r) in errors.iter().zip([10.0, 20.0, 40.0]) {
        let want = r * r / (1.0f64 + r * r).powf(1.5);
        assert!((e - want).abs() < 1e-12, "{e} {want}");
    }
    assert!((errors[0] / errors[1] - 2.0).abs() < 0.05);
    assert!((errors[1] / errors[2] - 2.0).abs() < 0.05);
}

#[test]
fn curl_examples() {
    let points = shell_points(Dim::Two, 1.5, 6.0, 50);
    let ab = PotentialConfig::aharonov_bohm(1.0, 0.8);
    assert!(config_curl(&ab, &points, 1e-3).unwrap().iter().all(|b| b.planar().abs() < 1e-9));
    let uniform = |x: &Vec3| [-0.5 * x[1], 0.5 * x[0], 0.0];
    assert!(curl(&uniform, Dim::Two, &points, 1.0, 1e-3).unwrap().iter().all(|b| (b.planar() - 1.0).abs() < 1e-9));
    // a_hat = cos(theta): r A_theta does not depend on r, so the curl vanishes
    let cos = TransversalField::planar(profile(0.0, &[(1.0, 0.0)]));
    assert!(curl(&cos, Dim::Two, &points, 1.0, 1e-3).unwrap().iter().all(|b| b.planar().abs() < 1e-8));
    assert!(curl(&uniform, Dim::Two, &[[0.5, 0.0, 0.0]], 1.0, 1e-3).is_err());
}

#[test]
fn winding_one_turns_flux_alpha_into_alpha_plus_one() {
    let cfg = PotentialConfig::aharonov_bohm(1.0, 0.3);
    let g = GaugeElement::planar(1, AngularFunction::zero(4), 1e-10).unwrap();
    let moved = apply_gauge_to_potential(&cfg, &g).unwrap();
    assert!((flux(&moved, 2.0).unwrap() - 1.3).abs() < 1e-12);
}

#[test]
fn removing_the_angular_potential_leaves_pure_flux() {
    let cfg = planar(0.0, &[(0.3, -0.2), (0.0, 0.5)]);
    let d = decompose_transversal(&cfg.transversal, 1e-10).unwrap();
    let g = GaugeElement::planar(0, d.a0.scaled(-1.0), 1e-10).unwrap();
    let moved = apply_gauge_to_potential(&cfg, &g).unwrap();
    for x in shell_points(Dim::Two, 1.0, 10.0, 100) {
        assert!(norm(&moved.transversal.eval(&x)) < 1e-15);
    }
}

#[test]
fn leading_order_of_synthetic_two_forms() {
    let grid = Arc::new(SphereGrid::icosahedral(2));
    let radii = [50.0, 100.0, 200.0, 400.0];
    let pure = RadialSamples::sample(grid.clone(), &radii, |x| {
        let r = norm(x);
        (x[0] / r).powi(2) / (r * r)
    });
    let b = extract_leading_order(&pure, 1e-6).unwrap();
    for i in 0..grid.len() {
        assert!((b.value_at(i) - grid.node(i)[0].powi(2)).abs() < 1e-8);
    }
    // short-range field: |x|^2 B -> 0
    let swirl = VectorField::custom(|x: &Vec3| {
        let b = (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).powf(1.5);
        [-x[1] / b, x[0] / b, 0.0]
    });
    let forms = RadialSamples::sample_two_form(&swirl, grid.clone(), &radii, 1e-3);
    for c in &forms {
        let b = extract_leading_order(c, 1e-6).unwrap();
        assert!(b.max_abs() < 1e-6, "{}", b.max_abs());
    }
    // mixed decay: the correction vanishes with the extrapolation
    let mixed = RadialSamples::sample(grid.clone(), &radii, |x| {
        let r = norm(x);
        (x[0] / r).powi(2) / (r * r) + (x[2] / r) / (r * r * r)
    });
    let b = extract_leading_order(&mixed, 1e-6).unwrap();
    let worst = (0..grid.len()).map(|i| (b.value_at(i) - grid.node(i)[0].powi(2)).abs()).fold(0.0, f64::max);
    assert!(worst < 1.0 / 400.0, "{worst}");
}
