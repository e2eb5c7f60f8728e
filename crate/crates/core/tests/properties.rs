use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavedfs::control::{coupling_strength, lockin_sequence};
use wavedfs::dfsbuild::{build_dfs_plan, enumerate_affine_dfs, placement};
use wavedfs::metrology::{
    outcome_probabilities, qfi_mixed_via_dfs, twirl, MeasurementConfig, SensorCouplings,
};
use wavedfs::quadrature::coupling_quadrature;
use wavedfs::wavefield::*;

struct Case {
    scenario: Scenario,
    probe: MonochromaticField,
}

/// Known-phase scenario with `n ≤ 8` sensors and `d < n`, `d ≤ 4` noise waves.
fn random_case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=8);
    let d = rng.gen_range(0..=4.min(n - 1));
    let omega = rng.gen_range(0.5..2.0);
    let sensors =
        SensorArray::new((0..n).map(|_| vec![rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)]).collect()).unwrap();
    let plane = |rng: &mut ChaCha8Rng| {
        PlaneWave::from_direction(omega, rng.gen_range(0.3..1.5), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI))
            .unwrap()
    };
    let mut waves: Vec<Wave> = (0..d).map(|_| Wave::noise(plane(&mut rng))).collect();
    waves.push(Wave::signal(plane(&mut rng)));
    let probe = plane(&mut rng).into();
    Case {
        scenario: Scenario::new(sensors, waves, omega, rng.gen_range(1..=4)).unwrap(),
        probe,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_matches_phasor(kx in -3.0..3.0f64, ky in -3.0..3.0f64, phi in 0.0..7.0f64,
                            x in -5.0..5.0f64, y in -5.0..5.0f64, t in -10.0..10.0f64) {
        let f: MonochromaticField = PlaneWave::new(1.3, vec![kx, ky], phi).unwrap().into();
        let p = vec![x, y];
        let via = (phasor_at(&f, &p) * Complex64::from_polar(1.0, -1.3 * t)).re;
        prop_assert!((eval_field(&f, &p, t) - via).abs() < 1e-12);
    }

    #[test]
    fn couplings_are_odd_in_z(seed in any::<u64>(), mask in any::<u64>()) {
        let c = random_case(seed);
        let n = c.scenario.n();
        let plan = build_dfs_plan(&c.scenario, &SignString::all_ones(n), &FieldMode::KnownPhases).unwrap();
        let z = SignString::from_mask(mask & ((1 << n) - 1), n);
        let g = coupling_strength(&z, &plan.fast, &c.scenario.sensors, &c.probe).unwrap();
        let gm = coupling_strength(&z.negated(), &plan.fast, &c.scenario.sensors, &c.probe).unwrap();
        prop_assert_eq!(g, -gm);
    }

    #[test]
    fn plans_decouple_noise(seed in any::<u64>()) {
        let c = random_case(seed);
        let n = c.scenario.n();
        let z = SignString::all_ones(n);
        let plan = build_dfs_plan(&c.scenario, &z, &FieldMode::KnownPhases).unwrap();
        let slow = plan.slow.as_ref().unwrap();
        let amax = plan.amplitudes.iter().cloned().fold(0.0, f64::max);
        prop_assert!((amax - 1.0).abs() < 1e-12);
        for noise in c.scenario.noise() {
            let gf = coupling_strength(&z, &plan.fast, &c.scenario.sensors, noise).unwrap();
            let gs = coupling_strength(&z, slow, &c.scenario.sensors, noise).unwrap();
            prop_assert!(gf.abs() <= 1e-9 * plan.signal_coupling_fast.abs());
            prop_assert!(gs.abs() <= 1e-9 * plan.signal_coupling_slow.unwrap().abs());
        }
        prop_assert!(rel(plan.slow_to_fast_ratio().unwrap(), 4.0 / PI) < 1e-9);
        // The ratio holds sensor by sensor, hence for any resonant probe.
        let gf = SensorCouplings::from_probe(&plan.fast, &c.scenario.sensors, &c.probe).unwrap();
        let gs = SensorCouplings::from_probe(slow, &c.scenario.sensors, &c.probe).unwrap();
        for (a, b) in gf.per_sensor.iter().zip(&gs.per_sensor) {
            prop_assert!((b - 4.0 / PI * a).abs() < 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn closed_form_matches_quadrature(seed in any::<u64>()) {
        let c = random_case(seed);
        let n = c.scenario.n();
        let z = SignString::from_mask(seed & ((1 << n) - 1), n);
        let plan = build_dfs_plan(&c.scenario, &SignString::all_ones(n), &FieldMode::KnownPhases).unwrap();
        for control in [&plan.fast, plan.slow.as_ref().unwrap()] {
            let closed = coupling_strength(&z, control, &c.scenario.sensors, &c.probe).unwrap();
            let quad = coupling_quadrature(&z, control, &c.scenario.sensors, |x: &[f64], t| eval_field(&c.probe, x, t), &[]).unwrap();
            let scale = c.scenario.duration() * n as f64;
            prop_assert!((closed - quad).abs() < 1e-9 * scale, "{} vs {}", closed, quad);
        }
    }

    #[test]
    fn partitions_cover_and_negate(seed in any::<u64>()) {
        let c = random_case(seed);
        let n = c.scenario.n();
        let plan = build_dfs_plan(&c.scenario, &SignString::all_ones(n), &FieldMode::KnownPhases).unwrap();
        let part = enumerate_affine_dfs(&c.scenario, &plan.fast, None).unwrap();
        let total: usize = part.classes.iter().map(|k| k.len()).sum();
        prop_assert_eq!(total, 1 << n);
        let all = (1u64 << n) - 1;
        prop_assert_eq!(part.class_index(0), part.class_index(all));
        for class in &part.classes {
            let neg = part.class_of(!class.members[0] & all);
            for (a, b) in class.kappa.iter().zip(&neg.kappa) {
                prop_assert!((a + b).abs() <= 1e-6 * (1.0 + a.abs()));
            }
            prop_assert_eq!(neg.len(), class.len());
        }
    }

    #[test]
    fn outcome_probabilities_and_derivatives(seed in any::<u64>()) {
        let c = random_case(seed);
        let n = c.scenario.n().min(6);
        let s = c.scenario.restrict(&(0..n).collect::<Vec<_>>()).unwrap();
        let d = s.noise().count();
        prop_assume!(n > d);
        let plan = build_dfs_plan(&s, &SignString::all_ones(n), &FieldMode::KnownPhases).unwrap();
        let part = enumerate_affine_dfs(&s, &plan.fast, None).unwrap();
        let sig = SensorCouplings::from_probe(&plan.fast, &s.sensors, s.signal().unwrap()).unwrap();
        let g = |m: u64| sig.g(m) / s.duration();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let qubits: Vec<[Complex64; 2]> = (0..n)
            .map(|_| {
                let a: f64 = rng.gen_range(0.0..PI);
                [Complex64::new(a.cos(), 0.0), Complex64::from_polar(a.sin(), rng.gen_range(0.0..2.0 * PI))]
            })
            .collect();
        let mix = twirl(&wavedfs::metrology::product_state(&qubits), &part).unwrap();
        let config = MeasurementConfig::new(
            (0..n).map(|_| rng.gen_range(0.0..PI)).collect(),
            (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect(),
        ).unwrap();
        let theta = rng.gen_range(-1.0..1.0);
        let (p, dp) = outcome_probabilities(&mix, &g, theta, &config).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let h = 1e-5;
        let (pp, _) = outcome_probabilities(&mix, &g, theta + h, &config).unwrap();
        let (pm, _) = outcome_probabilities(&mix, &g, theta - h, &config).unwrap();
        let scale = dp.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-12);
        for k in 0..p.len() {
            let fd = (pp[k] - pm[k]) / (2.0 * h);
            // Central differences carry roughly ε/h of rounding noise.
            prop_assert!((fd - dp[k]).abs() <= 1e-5 * scale + 1e-10, "{} vs {}", fd, dp[k]);
        }
        let cfi: f64 = p.iter().zip(&dp).filter(|(p, _)| **p > 1e-14).map(|(p, d)| d * d / p).sum();
        prop_assert!(cfi <= qfi_mixed_via_dfs(&mix, &g) + 1e-9);
    }

    #[test]
    fn placement_cancels(alpha in proptest::collection::vec(0.0..2.0 * PI, 1..=4), t in -5.0..5.0f64, phi in 0.0..6.0f64) {
        let noise: Vec<PlaneWave> = alpha.iter().map(|&a| PlaneWave::from_direction(1.0, 1.0, a, phi).unwrap()).collect();
        let s = placement(&noise, &[0.3, -0.2]).unwrap();
        prop_assert_eq!(s.len(), 1 << noise.len());
        for w in &noise {
            let f: MonochromaticField = w.into();
            let total: f64 = s.positions().iter().map(|x| eval_field(&f, x, t)).sum();
            prop_assert!(total.abs() < 1e-10);
        }
    }
}

#[test]
fn lockin_odd_harmonics_decay() {
    let lock = lockin_sequence(1.0, 6.0 * PI, 1).unwrap();
    let sensors = SensorArray::new(vec![vec![0.0, 0.0]]).unwrap();
    let z = SignString::all_ones(1);
    let resonant = |w: f64| {
        let f: MonochromaticField = PlaneWave::new(w, vec![0.0, 0.0], PI / 2.0).unwrap().into();
        coupling_strength(&z, &lock, &sensors, &f).unwrap()
    };
    let g1 = resonant(1.0).abs();
    assert!((g1 - 12.0).abs() < 1e-9 * 12.0);
    for l in 1..=5 {
        let odd = resonant((2 * l - 1) as f64).abs();
        assert!((odd * (2 * l - 1) as f64 - g1).abs() < 1e-9 * g1);
        assert!(resonant((2 * l) as f64).abs() < 1e-10);
    }
}
