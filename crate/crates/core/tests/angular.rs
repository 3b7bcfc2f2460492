use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use abgauge_core::angular::{AngularFunction, Interpolation, SphereFunction, SphereGrid};
use abgauge_core::Error;
use proptest::prelude::*;

/// Zero-mean real trig polynomial from `(a_k, b_k)` pairs, `k = 1..`.
fn trig(order: usize, terms: &[(f64, f64)]) -> AngularFunction {
    let t: Vec<_> = terms.iter().enumerate().map(|(i, &(a, b))| (i + 1, a, b)).collect();
    AngularFunction::from_cos_sin(order, 0.0, &t).unwrap()
}

fn direct_sum(terms: &[(f64, f64)], theta: f64) -> f64 {
    terms.iter().enumerate().map(|(i, &(a, b))| {
        let k = (i + 1) as f64;
        a * (k * theta).cos() + b * (k * theta).sin()
    }).sum()
}

fn terms(max_degree: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_degree)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn antiderivative_differentiates_back(t in terms(16)) {
        let f = trig(16, &t);
        let g = f.zero_mean_antiderivative(1e-10).unwrap();
        prop_assert!(g.mean().abs() < 1e-15);
        prop_assert!(g.derivative().max_difference(&f, 720) < 1e-12);
    }

    #[test]
    fn evaluation_matches_direct_summation(t in terms(12), theta in -10.0..10.0f64) {
        let f = trig(12, &t);
        prop_assert!((f.eval(theta) - direct_sum(&t, theta)).abs() < 1e-13);
    }

    #[test]
    fn evaluations_stay_real(t in terms(12), theta in 0.0..TAU) {
        let f = trig(12, &t);
        let g = f.zero_mean_antiderivative(1e-10).unwrap().add(&f.derivative()).scaled(0.3);
        for h in [&f, &g] {
            prop_assert!(h.eval_complex(theta).im.abs() < 1e-12);
        }
    }

    #[test]
    fn evaluation_is_periodic(t in terms(12), theta in -4.0..4.0f64) {
        let f = trig(12, &t);
        prop_assert!((f.eval(theta) - f.eval(theta + TAU)).abs() < 1e-12);
    }

    #[test]
    fn antipodal_difference_is_antisymmetric(t in terms(10), theta in 0.0..TAU) {
        let f = trig(10, &t);
        let w = [theta.cos(), theta.sin(), 0.0];
        let minus = [-w[0], -w[1], 0.0];
        prop_assert_eq!(f.antipodal_difference(&w), -f.antipodal_difference(&minus));
    }
}

#[test]
fn cos_integrates_to_sin() {
    let g = trig(4, &[(1.0, 0.0)]).zero_mean_antiderivative(1e-10).unwrap();
    for j in 0..100 {
        let t = 0.07 * j as f64;
        assert!((g.eval(t) - t.sin()).abs() < 1e-15);
    }
    assert!(AngularFunction::zero(4).zero_mean_antiderivative(1e-10).unwrap().is_zero());
}

#[test]
fn nonzero_mean_is_rejected() {
    let f = AngularFunction::from_cos_sin(4, 0.3, &[(1, 1.0, 0.0)]).unwrap();
    assert!(matches!(f.zero_mean_antiderivative(1e-10), Err(Error::NonzeroMean { .. })));
}

#[test]
fn cos_plus_sin_two_has_accurate_antiderivative() {
    let f = AngularFunction::from_cos_sin(8, 0.0, &[(1, 1.0, 0.0), (2, 0.0, 3.0)]).unwrap();
    let g = f.zero_mean_antiderivative(1e-10).unwrap();
    // centred differences of g at 720 points, compared with f
    let h = 1e-4;
    let worst = (0..720)
        .map(|j| {
            let t = TAU * j as f64 / 720.0;
            let fd = (g.eval(t + h) - g.eval(t - h)) / (2.0 * h);
            let exact = g.derivative().eval(t);
            assert!((exact - f.eval(t)).abs() < 1e-12);
            (fd - f.eval(t)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-7, "{worst}");
}

#[test]
fn circle_antipodal_examples() {
    let even = AngularFunction::from_cos_sin(4, 0.0, &[(2, 1.0, 0.0)]).unwrap();
    let sin = AngularFunction::from_cos_sin(4, 0.0, &[(1, 0.0, 1.0)]).unwrap();
    for theta in [0.0f64, 0.4, 2.0, 5.5] {
        assert!(even.antipodal_difference(&[theta.cos(), theta.sin(), 0.0]).abs() < 1e-15);
    }
    assert!((sin.antipodal_difference(&[0.0, 1.0, 0.0]) - 2.0).abs() < 1e-15);
    assert!((sin.antipodal_difference_at(PI / 2.0) - 2.0).abs() < 1e-15);
}

#[test]
fn sphere_grid_is_antipodally_closed() {
    for level in 0..4 {
        let grid = SphereGrid::icosahedral(level);
        for i in 0..grid.len() {
            let a = grid.antipode(i);
            let (w, v) = (grid.node(i), grid.node(a));
            assert_eq!([w[0], w[1], w[2]], [-v[0], -v[1], -v[2]]);
            assert_eq!(grid.antipode(a), i);
        }
    }
}

#[test]
fn sphere_odd_cubic_has_closed_form_difference() {
    let grid = Arc::new(SphereGrid::icosahedral(3));
    let f = SphereFunction::from_fn(grid.clone(), Interpolation::Cubic, |w| w[0] * w[1] * w[2]);
    for i in 0..grid.len() {
        let w = grid.node(i);
        let want = 2.0 * w[0] * w[1] * w[2];
        assert!((f.antipodal_difference(&w) - want).abs() < 1e-14);
        let minus = [-w[0], -w[1], -w[2]];
        assert_eq!(f.antipodal_difference(&w), -f.antipodal_difference(&minus));
    }
    // off the nodes the difference is interpolated
    let w = [0.48, -0.6, 0.64];
    assert!((f.antipodal_difference(&w) - 2.0 * w[0] * w[1] * w[2]).abs() < 1e-3);
}
