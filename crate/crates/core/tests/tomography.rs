use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use abgauge_core::angular::{AngularFunction, Interpolation, SphereFunction, SphereGrid};
use abgauge_core::fields::{
    Envelope, PotentialConfig, ScalarField, ScalarKind, ShortRangeField, TransversalField, TwoForm, VectorField,
    VectorKind,
};
use abgauge_core::geom::{cross, dot, norm, normalize, Dim, Vec3};
use abgauge_core::sampling::shell_points;
use abgauge_core::tomography::{
    antipodal_defect, find_gauge_scalar, line_integral_vector, line_integral_vector_quadrature, plane_restrict,
    plane_restrict_curl, resolve_winding, Annulus, Line, Plane, XRayComponent, XRayData, XRayValues,
};
use abgauge_core::{Error, Tolerances};
use proptest::prelude::*;

fn full_config() -> PotentialConfig {
    let profile = AngularFunction::from_cos_sin(8, 0.35, &[(1, 0.3, -0.2), (2, 0.1, 0.25), (5, -0.05, 0.04)]).unwrap();
    PotentialConfig {
        transversal: TransversalField::planar(profile),
        short_range: ShortRangeField::new(
            VectorField::Analytic(VectorKind::RingVortex { amp: 0.8, radius: 2.0, width: 0.5 }),
            Envelope::new(10.0, 1.0),
        ),
        ..PotentialConfig::aharonov_bohm(1.0, 0.0)
    }
}

fn unit3() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, 0.0..TAU).prop_map(|(z, a)| {
        let s = (1.0 - z * z).sqrt();
        [s * a.cos(), s * a.sin(), z]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_integral_matches_quadrature(phi in 0.0..TAU, p in prop_oneof![-20.0..-1.2f64, 1.2..20.0f64]) {
        let cfg = full_config();
        let line = Line::planar(phi, p);
        let split = line_integral_vector(&cfg, &line, 1e-11).unwrap();
        let quad = line_integral_vector_quadrature(&cfg, &line, 1e-11).unwrap();
        prop_assert!((split - quad).abs() < 1e-7, "{} vs {}", split, quad);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn plane_restriction_of_a_gradient_vanishes(normal in unit3(), offset in 1.5..6.0f64) {
        let l = ScalarField::Analytic(ScalarKind::GaussianBump { amp: 1.0, center: [1.0, -1.0, 2.0], width: 1.2 });
        let a = VectorField::Gradient(l);
        let plane = Plane::with_normal(normal, offset).unwrap();
        let b = plane_restrict_curl(&a, &plane, 1.0, 7, 3.0, 1e-3).unwrap();
        prop_assert!(b.data().iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn plane_restriction_matches_pullback(m in prop::array::uniform9(-1.0..1.0f64), normal in unit3(), offset in 1.5..4.0f64) {
        // A(x) = M x has dA(u, v) = v . M u - u . M v everywhere
        let mx = move |x: &Vec3| -> Vec3 {
            [
                m[0] * x[0] + m[1] * x[1] + m[2] * x[2],
                m[3] * x[0] + m[4] * x[1] + m[5] * x[2],
                m[6] * x[0] + m[7] * x[1] + m[8] * x[2],
            ]
        };
        let a = VectorField::custom(mx);
        let plane = Plane::with_normal(normal, offset).unwrap();
        let b = plane_restrict_curl(&a, &plane, 1.0, 5, 2.0, 1e-3).unwrap();
        let (e1, e2) = (plane.e1(), plane.e2());
        let want = dot(&e2, &mx(&e1)) - dot(&e1, &mx(&e2));
        prop_assert!(b.data().iter().all(|v| (v - want).abs() < 1e-8));
    }
}

#[test]
fn ab_integral_is_constant_over_lines() {
    for alpha in [0.25, 0.5, 1.0, 2.5] {
        let cfg = PotentialConfig::aharonov_bohm(1.0, alpha);
        let mut values = Vec::new();
        for i in 0..100 {
            // quasi-random direction and distance, origin on the left
            let phi = TAU * abgauge_core::sampling::weyl1(i);
            let p = 1.05 + 30.0 * abgauge_core::sampling::weyl1(i + 1000);
            let line = Line::planar(phi, p);
            let quad = line_integral_vector_quadrature(&cfg, &line, 1e-11).unwrap();
            assert!((quad - alpha * PI).abs() < 1e-8, "alpha {alpha}: {quad}");
            values.push(line_integral_vector(&cfg, &line, 1e-11).unwrap());
        }
        let (lo, hi) = values.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
        assert!(hi - lo < 1e-10);
        assert!((values[0] - alpha * PI).abs() < 1e-14);
    }
}

#[test]
fn gradient_integral_is_the_antipodal_difference() {
    for i in 0..20 {
        let terms: Vec<_> = (1..=6)
            .map(|k| {
                let s = abgauge_core::sampling::weyl2(7 * i + k);
                (k, (s.0 - 0.5) / k as f64, (s.1 - 0.5) / k as f64)
            })
            .collect();
        let phi = AngularFunction::from_cos_sin(8, 0.0, &terms).unwrap();
        let cfg = PotentialConfig { transversal: TransversalField::planar(phi.derivative()), ..PotentialConfig::aharonov_bohm(1.0, 0.0) };
        let dir = TAU * abgauge_core::sampling::weyl1(i);
        let line = Line::planar(dir, 1.5 + i as f64 * 0.3);
        let w = line.omega();
        let quad = line_integral_vector_quadrature(&cfg, &line, 1e-11).unwrap();
        assert!((quad - phi.antipodal_difference(&w)).abs() < 1e-7);
    }
}

/// Lines at distances `1.5 * 1.25^k` with phases `2 pi m + c p^{-eps0}`.
fn phase_family(m: i64, c: f64, eps0: f64, direction: f64) -> XRayData {
    let d: Vec<f64> = (0..60).map(|k| 1.5 * 1.25f64.powi(k)).collect();
    let lines = d.iter().map(|&p| Line::planar(direction, p)).collect();
    let phases = d.iter().map(|&p| TAU * m as f64 + c * p.powf(-eps0)).collect();
    XRayData::new(lines, XRayValues::Real(phases), XRayComponent::Vector).unwrap()
}

#[test]
fn winding_is_resolved_for_every_family() {
    let mut cases = 0;
    for m in -3..=3 {
        for eps0 in [0.5, 1.0, 2.0] {
            for j in 0..10 {
                let (u, v) = abgauge_core::sampling::weyl2(j + 10 * (m + 3) as usize);
                let data = phase_family(m, 4.0 * (u - 0.5), eps0, TAU * v);
                assert_eq!(resolve_winding(&data), Ok(m), "m {m} eps0 {eps0} case {j}");
                cases += 1;
            }
        }
    }
    assert_eq!(cases, 210);
}

fn random_gradient(i: usize) -> ShortRangeField {
    let (u, v) = abgauge_core::sampling::weyl2(i);
    let w = abgauge_core::sampling::weyl1(i);
    let bump = ScalarField::Analytic(ScalarKind::GaussianBump {
        amp: 2.0 * u - 1.0,
        center: [3.0 * (v - 0.5), 3.0 * (w - 0.5), 0.0],
        width: 0.6 + u,
    });
    let bracket = ScalarField::Analytic(ScalarKind::Bracket { amp: v, power: 1.0 });
    ShortRangeField::new(VectorField::Gradient(bump.sum(bracket)), Envelope::new(10.0, 1.0))
}

#[test]
fn gauge_scalar_gradient_reproduces_the_difference() {
    let region = Annulus::new(1.0, 8.0).unwrap();
    let tol = Tolerances::default();
    for i in 0..20 {
        let adiff = random_gradient(i);
        let l = find_gauge_scalar(&adiff, Dim::Two, &region, &tol).unwrap();
        for x in shell_points(Dim::Two, 1.2, 7.0, 30) {
            let h = 1e-3 * norm(&x);
            let g = l.gradient(&x, h);
            let want = adiff.field.eval(&x);
            let err = ((g[0] - want[0]).powi(2) + (g[1] - want[1]).powi(2)).sqrt();
            assert!(err < 1e-6, "field {i} at {x:?}: {err}");
        }
    }
}

#[test]
fn flux_in_the_difference_is_always_residual() {
    let region = Annulus::new(1.0, 8.0).unwrap();
    for i in 0..20 {
        let alpha = 0.05 + 0.9 * abgauge_core::sampling::weyl1(i) + (i % 3) as f64;
        let a = VectorField::custom(move |x: &Vec3| abgauge_core::fields::eval_ab_potential(alpha, x).unwrap());
        let diff = ShortRangeField { field: a.sum(random_gradient(i).field), envelope: Some(Envelope::new(10.0, 1.0)) };
        let out = find_gauge_scalar(&diff, Dim::Two, &region, &Tolerances::default());
        assert!(matches!(out, Err(Error::ResidualFlux { .. })), "{out:?}");
    }
}

#[test]
fn antipodal_defect_of_a_small_odd_perturbation() {
    let grid = Arc::new(SphereGrid::icosahedral(3));
    let phi = SphereFunction::from_fn(grid, Interpolation::Cubic, |w| w[0] * w[0] - w[1] * w[2] + 1e-6 * w[2]);
    let d = antipodal_defect(&phi);
    assert!((d.max_defect - 2e-6).abs() < 1e-12);
    assert!(d.constant_vanishes);
}

#[test]
fn constant_two_form_on_a_tilted_plane() {
    // B = e_x ^ e_y paired with the plane spanned by e1, e2 is the normal's third component
    let n = normalize(&[1.0, 2.0, 2.0]);
    let plane = Plane::with_normal(n, 2.0).unwrap();
    let b = plane_restrict(|_| TwoForm([0.0, 0.0, 1.0]), &plane, 1.0, 4, 1.0).unwrap();
    let e3 = cross(&plane.e1(), &plane.e2());
    assert!(b.data().iter().all(|v| (v - e3[2]).abs() < 1e-15));
}
