use abgauge_core::fields::{
    Envelope, PotentialConfig, ScalarField, ScalarKind, ScalarPotential, ShortRangeField, VectorField, VectorKind,
};
use abgauge_core::tomography::{
    line_integral_scalar, line_integral_vector, radon_invert_scalar, recover_field_2d, RadonOptions, SinogramGeometry,
    XRayComponent, XRayData, XRayValues,
};

const RING: ScalarKind = ScalarKind::GaussianRing { amp: 1.0, radius: 1.5, width: 0.15 };

fn ring_error(angles: usize, offsets: usize) -> f64 {
    let v = ScalarPotential::new(ScalarField::Analytic(RING), Envelope::new(5.0, 1.0));
    let geometry = SinogramGeometry::new(angles, offsets, 3.0, 1.0).unwrap();
    let lines = geometry.lines();
    let values = lines.iter().map(|l| line_integral_scalar(&v, l, 1.0, 1e-10).unwrap()).collect();
    let data = XRayData::new(lines, XRayValues::Real(values), XRayComponent::Scalar).unwrap();
    let rec = radon_invert_scalar(&data, &geometry, &RadonOptions::default()).unwrap();
    rec.relative_l2_error(|x| RING.value(x))
}

fn vector_data(cfg: &PotentialConfig, geometry: &SinogramGeometry) -> (Vec<abgauge_core::tomography::Line>, Vec<f64>) {
    let lines = geometry.lines();
    let values = lines.iter().map(|l| line_integral_vector(cfg, l, 1e-10).unwrap()).collect();
    (lines, values)
}

#[test]
fn ring_potential_is_recovered() {
    let e = ring_error(180, 256);
    assert!(e < 0.05, "relative L2 error {e}");
}

#[test]
fn halving_the_sampling_step_reduces_the_error() {
    let coarse = ring_error(90, 128);
    let fine = ring_error(180, 256);
    assert!(coarse / fine >= 1.5, "coarse {coarse}, fine {fine}");
}

#[test]
fn ring_magnetic_field_is_recovered_from_real_and_unimodular_data() {
    let cfg = PotentialConfig {
        short_range: ShortRangeField::new(
            VectorField::Analytic(VectorKind::RingVortex { amp: 1.0, radius: 1.5, width: 0.15 }),
            Envelope::new(2.0, 1.0),
        ),
        ..PotentialConfig::aharonov_bohm(1.0, 0.4)
    };
    let geometry = SinogramGeometry::new(180, 256, 3.0, 1.0).unwrap();
    let (lines, values) = vector_data(&cfg, &geometry);
    let real = XRayData::new(lines.clone(), XRayValues::Real(values.clone()), XRayComponent::Vector).unwrap();
    let rec = recover_field_2d(&real, &geometry, &RadonOptions::default()).unwrap();
    let e = rec.relative_l2_error(|x| RING.value(x));
    assert!(e < 0.08, "real data: {e}");
    let unimodular = XRayData::exponentiated(lines, &values).unwrap();
    let rec = recover_field_2d(&unimodular, &geometry, &RadonOptions::default()).unwrap();
    let e = rec.relative_l2_error(|x| RING.value(x));
    assert!(e < 0.08, "unimodular data: {e}");
}

#[test]
fn gradient_data_has_no_magnetic_field() {
    let l = ScalarField::Analytic(ScalarKind::GaussianRing { amp: 0.7, radius: 1.8, width: 0.3 });
    let cfg = PotentialConfig {
        short_range: ShortRangeField::new(VectorField::Gradient(l), Envelope::new(5.0, 1.0)),
        ..PotentialConfig::aharonov_bohm(1.0, 0.25)
    };
    let geometry = SinogramGeometry::new(180, 256, 3.0, 1.0).unwrap();
    let (lines, values) = vector_data(&cfg, &geometry);
    let data = XRayData::new(lines, XRayValues::Real(values), XRayComponent::Vector).unwrap();
    let rec = recover_field_2d(&data, &geometry, &RadonOptions::default()).unwrap();
    // the ring phantom above has unit peak
    assert!(rec.max_abs() < 1e-3, "max |B| = {}", rec.max_abs());
}
