use std::f64::consts::{PI, TAU};

use abgauge_core::angular::AngularFunction;
use abgauge_core::fields::{GaugeElement, Phase};
use abgauge_core::scattering::{
    ab_channel, ab_channel_quadrature, ab_kernel_channels, apply_gauge_to_kernel, assemble_kernel,
    gauge_equivalence_solver, kernel_distance, Remainder, ScatteringKernel, SolverOutcome, Witness,
};
use abgauge_core::{Complex64, Tolerances};
use proptest::prelude::*;

fn bump(theta: f64, theta_prime: f64) -> Complex64 {
    // periodic Gaussian of width 0.4 centred at (2.5, 1.5)
    let d = |a: f64, c: f64| {
        let x = (a - c).rem_euclid(TAU);
        if x > PI { x - TAU } else { x }
    };
    let r2 = d(theta, 2.5).powi(2) + d(theta_prime, 1.5).powi(2);
    Complex64::new(0.2 * (-r2 / (2.0 * 0.16)).exp(), 0.05 * (-r2 / (2.0 * 0.16)).exp())
}

fn sine_phase() -> AngularFunction {
    AngularFunction::from_cos_sin(4, 0.0, &[(1, 0.0, 0.2)]).unwrap()
}

fn kernel(alpha: f64) -> ScatteringKernel {
    let rem = Remainder::from_fn(128, 1.0, 0.5, bump).unwrap();
    assemble_kernel(alpha, sine_phase(), sine_phase(), rem, 1.0).unwrap()
}

fn phase_of(g: &GaugeElement) -> &AngularFunction {
    match &g.phase {
        Phase::Circle(f) => f,
        Phase::Sphere(_) => panic!("planar gauge expected"),
    }
}

fn gauge_phase() -> impl Strategy<Value = AngularFunction> {
    prop::collection::vec((-0.3..0.3f64, -0.3..0.3f64), 1..=8).prop_map(|t| {
        let t: Vec<_> = t.iter().enumerate().map(|(i, &(a, b))| (i + 1, a, b)).collect();
        AngularFunction::from_cos_sin(8, 0.0, &t).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_recovers_applied_gauges(
        m in -3i64..=3,
        phi in gauge_phase(),
        alpha in prop::sample::select(vec![0.25, 0.5, 0.75]),
    ) {
        let k = kernel(alpha);
        let g = GaugeElement::planar(m, phi.clone(), 1e-12).unwrap();
        let moved = apply_gauge_to_kernel(&k, &g).unwrap();
        let out = gauge_equivalence_solver(&k, &moved, &Tolerances::default()).unwrap();
        let found = out.gauge().expect("equivalent");
        prop_assert_eq!(found.m, m);
        prop_assert!(phase_of(found).max_difference(&phi, 720) < 1e-6);
    }

    #[test]
    fn gauges_act_as_a_group(m1 in -3i64..=3, m2 in -3i64..=3, p1 in gauge_phase(), p2 in gauge_phase()) {
        let k = kernel(0.3);
        let g1 = GaugeElement::planar(m1, p1, 1e-12).unwrap();
        let g2 = GaugeElement::planar(m2, p2, 1e-12).unwrap();
        let stepwise = apply_gauge_to_kernel(&apply_gauge_to_kernel(&k, &g1).unwrap(), &g2).unwrap();
        let composite = apply_gauge_to_kernel(&k, &g2.compose(&g1).unwrap()).unwrap();
        prop_assert_eq!(stepwise.winding(), composite.winding());
        prop_assert!(stepwise.phase_out().coefficient_distance(composite.phase_out()) < 1e-12);
        prop_assert!(stepwise.phase_in().coefficient_distance(composite.phase_in()) < 1e-12);
        prop_assert!(kernel_distance(&stepwise, &composite).unwrap() < 1e-12);
        let back = apply_gauge_to_kernel(&stepwise, &g2.compose(&g1).unwrap().inverse()).unwrap();
        prop_assert!(kernel_distance(&back, &k).unwrap() < 1e-12);
    }
}

#[test]
fn channels_are_unimodular() {
    for i in 1..=9 {
        let alpha = 0.1 * i as f64;
        for (_, z) in ab_kernel_channels(alpha, 32).iter() {
            assert!((z.norm() - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn channels_are_periodic_in_flux_up_to_a_shift() {
    for i in 0..40 {
        let alpha = -2.0 + 0.1 * i as f64 + 0.013;
        for k in -32..=32 {
            assert!((ab_channel(alpha + 2.0, k + 2) - ab_channel(alpha, k)).norm() < 1e-8);
        }
    }
}

#[test]
fn integer_flux_gives_signs() {
    for alpha in -3..=3 {
        let want = Complex64::new(if alpha % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        assert!(ab_kernel_channels(alpha as f64, 32).iter().all(|(_, z)| z == want));
    }
}

#[test]
fn half_flux_channels_agree_with_quadrature() {
    for k in -5..=5 {
        let (q, _) = ab_channel_quadrature(0.5, k);
        let want = if k >= 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
        assert!((q - want).norm() < 1e-9, "{k}: {q}");
    }
}

#[test]
fn pure_flux_kernel_grows_like_the_inverse_distance() {
    for alpha in [0.25, 0.5, 0.75, 1.3, -0.4] {
        let k = assemble_kernel(alpha, AngularFunction::zero(2), AngularFunction::zero(2), Remainder::zero(16).unwrap(), 1.0)
            .unwrap();
        let ts: Vec<f64> = (0..=20).map(|i| 1e-3 * 100f64.powf(i as f64 / 20.0)).collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            ts.iter().map(|&t| (t.ln(), k.eval(0.7 + t, 0.7).unwrap().norm().ln())).unzip();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((0.9..=1.1).contains(&-slope), "alpha {alpha}: exponent {}", -slope);
    }
}

#[test]
fn assembled_kernel_matches_the_direct_formula() {
    let k = kernel(0.3);
    assert!(k.remainder().bound_ratio() <= 1.0);
    let (t, s) = (1.0f64, 0.4f64);
    let pre = Complex64::from_polar(1.0, 0.2 * t.sin() - 0.2 * (s + PI).sin());
    let pv = Complex64::new(0.0, (0.3 * PI).sin() / PI) / (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t - s));
    let want = pre * (pv + bump(t, s));
    assert!((k.eval(t, s).unwrap() - want).norm() < 1e-10);
}

#[test]
fn kernel_distance_examples() {
    let k = kernel(0.3);
    assert_eq!(kernel_distance(&k, &k).unwrap(), 0.0);
    let shifted = apply_gauge_to_kernel(&k, &GaugeElement::planar(1, AngularFunction::zero(2), 1e-12).unwrap()).unwrap();
    // one channel flips from e^{-i alpha pi} to -e^{i alpha pi}: |.| = 2 cos(alpha pi) at least
    assert!(kernel_distance(&k, &shifted).unwrap() >= 2.0 * (0.3 * PI).cos() - 1e-12);
    let nearby = kernel(0.3 + 1e-3);
    let d = kernel_distance(&k, &nearby).unwrap();
    assert!(d > 1e-4 && d < 1e-1, "{d}");
    let coarse = assemble_kernel(0.3, sine_phase(), sine_phase(), Remainder::zero(64).unwrap(), 1.0).unwrap();
    assert!(kernel_distance(&k, &coarse).is_err());
}

#[test]
fn solver_recovers_winding_two_with_cosine_phase() {
    let k = kernel(0.4);
    let phi = AngularFunction::from_cos_sin(4, 0.0, &[(2, 0.1, 0.0)]).unwrap();
    let moved = apply_gauge_to_kernel(&k, &GaugeElement::planar(2, phi.clone(), 1e-12).unwrap()).unwrap();
    let out = gauge_equivalence_solver(&k, &moved, &Tolerances::default()).unwrap();
    let g = out.gauge().unwrap();
    assert_eq!(g.m, 2);
    assert!(phase_of(g).max_difference(&phi, 720) < 1e-6);
}

#[test]
fn integer_flux_never_yields_a_unique_gauge() {
    for alpha in [-2.0, -1.0, 0.0, 1.0, 3.0] {
        let k = kernel(alpha);
        for m in -3..=3 {
            let g = GaugeElement::planar(m, sine_phase(), 1e-12).unwrap();
            let moved = apply_gauge_to_kernel(&k, &g).unwrap();
            let out = gauge_equivalence_solver(&k, &moved, &Tolerances::default()).unwrap();
            assert!(matches!(out, SolverOutcome::Ambiguous { .. }));
        }
    }
}

#[test]
fn flux_mismatch_is_witnessed_by_channels() {
    let out = gauge_equivalence_solver(&kernel(0.3), &kernel(0.55), &Tolerances::default()).unwrap();
    let SolverOutcome::NotEquivalent { witness: Witness::Channel { first, second, .. } } = out else {
        panic!("{out:?}")
    };
    assert!((first - Complex64::from_polar(1.0, 0.6 * PI)).norm() < 1e-12);
    assert!((second - Complex64::from_polar(1.0, 1.1 * PI)).norm() < 1e-12);
}

#[test]
fn fluxes_differing_by_an_integer_are_related_by_winding() {
    let out = gauge_equivalence_solver(&kernel(0.3), &kernel(2.3), &Tolerances::default()).unwrap();
    let g = out.gauge().expect("equivalent");
    assert_eq!(g.m, 2);
    assert!(phase_of(g).max_coefficient() < 1e-9);
}
