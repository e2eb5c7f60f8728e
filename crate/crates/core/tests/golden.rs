//! Six-sensor worked example: two noise waves and one signal with local
//! phases given directly, ω = 1, three periods.

use std::f64::consts::PI;

use num_complex::Complex64;
use wavedfs::control::{coupling_to_row, scalar_product};
use wavedfs::dfsbuild::{orthogonalize, plan_from_field_matrix};
use wavedfs::quadrature::integrate;
use wavedfs::wavefield::{FieldMatrix, Role, Row, SignString};

const NOISE1: [f64; 6] = [0.87, 1.51, 0.74, 0.17, -1.58, -0.24];
const NOISE2: [f64; 6] = [-1.16, -0.75, -0.57, 0.66, 0.90, 1.35];
const SIGNAL: [f64; 6] = [-0.87, -1.51, -0.74, -0.17, 1.58, 0.24];
const T: f64 = 6.0 * PI;

/// Local signal `cos(θ − t)`.
fn row(theta: &[f64]) -> Row {
    Row::Phasor(theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect())
}

fn sine_row(theta: &[f64]) -> Row {
    Row::Phasor(theta.iter().map(|&t| -Complex64::i() * Complex64::from_polar(1.0, t)).collect())
}

fn known() -> FieldMatrix {
    FieldMatrix::new(
        vec![row(&NOISE1), row(&NOISE2), row(&SIGNAL)],
        vec![Role::Noise, Role::Noise, Role::Signal],
        T,
        Some(1.0),
    )
    .unwrap()
}

fn unknown() -> FieldMatrix {
    FieldMatrix::new(
        vec![row(&NOISE1), row(&NOISE2), sine_row(&NOISE1), sine_row(&NOISE2), row(&SIGNAL)],
        vec![Role::Noise, Role::Noise, Role::Noise, Role::Noise, Role::Signal],
        T,
        Some(1.0),
    )
    .unwrap()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[test]
fn known_phase_amplitudes_and_phases() {
    let z = SignString::all_ones(6);
    let plan = plan_from_field_matrix(&known(), &z).unwrap();
    assert_close(&plan.amplitudes, &[0.36, 0.82, 0.33, 0.81, 0.74, 1.00], 0.05);
    let want = [0.32, 2.33, 1.40, 1.12, -2.39, 0.59];
    for (g, w) in plan.phases.iter().zip(want) {
        assert!(angle_gap(*g, w) < 0.05, "{:?}", plan.phases);
    }
}

#[test]
fn unknown_phase_amplitudes() {
    let z = SignString::all_ones(6);
    let plan = plan_from_field_matrix(&unknown(), &z).unwrap();
    assert_close(&plan.amplitudes, &[0.49, 0.84, 0.20, 0.16, 1.00, 0.64], 0.05);
    // Low-amplitude sensors amplify the two-decimal rounding of the inputs.
    let want = [-0.46, 2.62, -1.46, 0.94, -2.11, 0.21];
    for (g, w) in plan.phases.iter().zip(want) {
        assert!(angle_gap(*g, w) < 0.1, "{:?}", plan.phases);
    }
}

#[test]
fn orthogonal_components() {
    let z = SignString::all_ones(6);
    for (f, want) in [
        (known(), [0.07, 0.15, 0.06, 0.15, 0.14, 0.18]),
        (unknown(), [0.10, 0.18, 0.04, 0.03, 0.21, 0.13]),
    ] {
        let o = orthogonalize(&f, &z).unwrap();
        let Row::Phasor(c) = o.s_perp_unit() else {
            panic!("phasor rows stay phasor")
        };
        let amps: Vec<f64> = c.iter().map(|v| v.norm()).collect();
        assert_close(&amps, &want, 0.02);
        for r in f.noise_rows() {
            let ip = scalar_product(&o.s_perp, r, &z, T, Some(1.0)).unwrap();
            assert!(ip.abs() < 1e-12, "{ip}");
        }
    }
}

#[test]
fn noise_couplings_vanish() {
    let z = SignString::all_ones(6);
    for f in [known(), unknown()] {
        let plan = plan_from_field_matrix(&f, &z).unwrap();
        for control in [Some(&plan.fast), plan.slow.as_ref()] {
            let control = control.unwrap();
            let sig = coupling_to_row(&z, control, f.signal_row(), Some(1.0)).unwrap();
            for r in f.noise_rows() {
                let g = coupling_to_row(&z, control, r, Some(1.0)).unwrap();
                assert!(g.abs() < 1e-9 * sig.abs(), "{g} vs {sig}");
            }
        }
        assert!((plan.slow_to_fast_ratio().unwrap() - 4.0 / PI).abs() < 1e-9 * 4.0 / PI);
    }
}

#[test]
fn scalar_product_matches_quadrature() {
    let z = SignString::all_ones(6);
    let direct = scalar_product(&row(&NOISE1), &row(&SIGNAL), &z, T, Some(1.0)).unwrap();
    let quad: f64 = (0..6)
        .map(|i| {
            let (a, b) = (NOISE1[i], SIGNAL[i]);
            integrate(&|t: f64| (a - t).cos() * (b - t).cos(), -T / 2.0, T / 2.0, &[], 1e-13)
        })
        .sum();
    assert!((direct - quad).abs() < 1e-10 * quad.abs().max(1.0), "{direct} vs {quad}");
}

#[test]
fn fast_control_reproduces_orthogonal_component() {
    let z = SignString::all_ones(6);
    let f = known();
    let o = orthogonalize(&f, &z).unwrap();
    let plan = plan_from_field_matrix(&f, &z).unwrap();
    let Row::Phasor(s) = &o.s_perp else { panic!() };
    let max = s.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for k in 0..400 {
        let t = -T / 2.0 + T * k as f64 / 399.0;
        for (i, c) in s.iter().enumerate() {
            let want = (c * Complex64::from_polar(1.0, -t)).re / max;
            assert!((plan.fast.value_at(i, t) - want).abs() < 1e-9);
        }
    }
}
