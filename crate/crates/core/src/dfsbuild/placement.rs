//! Sensor placement against known plane waves, signal-to-noise ratio and the
//! circular approximate-DFS construction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::control::{coupling_strength, ControlSequence, ProbeFamily};
use crate::wavefield::{
    FieldMode, MonochromaticField, PlaneWave, Scenario, SensorArray, SignString, Wave,
};
use crate::{Error, Result};

use super::{build_dfs_plan, DfsPlan};

/// Doubles the array once per noise wave, shifting the copy by half a
/// wavelength along `k̂_j` so every sensor gains a partner of opposite field.
pub fn placement(noise: &[PlaneWave], x0: &[f64]) -> Result<SensorArray> {
    if noise.is_empty() {
        return Err(Error::Precondition("placement needs at least one noise wave".into()));
    }
    let mut positions = vec![x0.to_vec()];
    for w in noise {
        let k2: f64 = w.kvec.iter().map(|k| k * k).sum();
        if k2 == 0.0 {
            return Err(Error::ZeroWaveVector);
        }
        if w.kvec.len() != x0.len() {
            return Err(Error::LengthMismatch {
                expected: x0.len(),
                got: w.kvec.len(),
            });
        }
        let shift: Vec<f64> = w.kvec.iter().map(|k| PI * k / k2).collect();
        let copies: Vec<Vec<f64>> = positions
            .iter()
            .map(|x| x.iter().zip(&shift).map(|(a, s)| a + s).collect())
            .collect();
        positions.extend(copies);
    }
    SensorArray::new(positions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrFlag {
    Finite,
    /// No coupling to the noise region at all.
    NoNoise,
    /// Neither signal nor noise couples.
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub snr: f64,
    pub signal_g2: f64,
    pub max_noise_g2: f64,
    /// Probe parameter attaining `max_noise_g2`.
    pub argmax: f64,
    pub flag: SnrFlag,
}

/// `g²(signal) / max_α g²(α)` over `points` probes spanning `region` (inclusive).
pub fn snr(
    z: &SignString,
    control: &ControlSequence,
    sensors: &SensorArray,
    signal: &MonochromaticField,
    family: &ProbeFamily,
    region: (f64, f64),
    points: usize,
) -> Result<SnrReport> {
    if points == 0 {
        return Err(Error::Precondition("empty noise grid".into()));
    }
    let grid = linspace(region.0, region.1, points);
    let spectrum = crate::control::coupling_spectrum(z, control, sensors, family, &grid)?;
    let (argmax, max_noise_g2) = spectrum
        .iter()
        .copied()
        .fold((grid[0], f64::NEG_INFINITY), |best, (p, g2)| if g2 > best.1 { (p, g2) } else { best });
    let g = coupling_strength(z, control, sensors, signal)?;
    let signal_g2 = g * g;
    let (snr, flag) = if max_noise_g2 > 0.0 {
        (signal_g2 / max_noise_g2, SnrFlag::Finite)
    } else if signal_g2 > 0.0 {
        (f64::INFINITY, SnrFlag::NoNoise)
    } else {
        (f64::NAN, SnrFlag::Undefined)
    };
    Ok(SnrReport {
        snr,
        signal_g2,
        max_noise_g2,
        argmax,
        flag,
    })
}

/// `points` values from `a` to `b` inclusive; a single point sits at `a`.
pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![a];
    }
    let h = (b - a) / (points - 1) as f64;
    (0..points).map(|k| a + k as f64 * h).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularAdfs {
    pub n: usize,
    pub virtual_noise: Vec<f64>,
    pub plan: DfsPlan,
    pub snr: SnrReport,
    /// Largest `|g|` over the virtual noise waves.
    pub virtual_noise_coupling: f64,
}

pub const CIRCLE_RADIUS: f64 = 1.0;
pub const CIRCLE_PERIODS: u32 = 3;
pub const SIGNAL_ANGLE: f64 = PI / 4.0;
pub const NOISE_REGION: (f64, f64) = (0.75 * PI, 1.75 * PI);

/// Sensors on a unit circle at angles `2πi/n`, a unit-wavenumber signal along
/// 45°, and `n/2` virtual noise waves spread over the opposite half plane.
pub fn circular_adfs(n: usize, grid_points: usize) -> Result<CircularAdfs> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::Precondition(format!("circular array needs an even n >= 2, got {n}")));
    }
    let omega = 1.0;
    let sensors = SensorArray::circle(n, CIRCLE_RADIUS, 0.0)?;
    let virtual_noise = linspace(NOISE_REGION.0, NOISE_REGION.1, n / 2);
    let mut waves: Vec<Wave> = virtual_noise
        .iter()
        .map(|&a| PlaneWave::from_direction(omega, 1.0, a, 0.0).map(Wave::noise))
        .collect::<Result<_>>()?;
    let signal = PlaneWave::from_direction(omega, 1.0, SIGNAL_ANGLE, 0.0)?;
    waves.push(Wave::signal(signal.clone()));
    let scenario = Scenario::new(sensors, waves, omega, CIRCLE_PERIODS)?;
    let z = SignString::all_ones(n);
    let plan = build_dfs_plan(&scenario, &z, &FieldMode::KnownPhases)?;
    let virtual_noise_coupling = scenario
        .noise()
        .map(|f| coupling_strength(&z, &plan.fast, &scenario.sensors, f).map(f64::abs))
        .try_fold(0.0, |m, g| g.map(|g| f64::max(m, g)))?;
    let family = ProbeFamily::Direction {
        omega,
        k_mag: 1.0,
        phi: 0.0,
    };
    let report = snr(
        &z,
        &plan.fast,
        &scenario.sensors,
        &signal.into(),
        &family,
        NOISE_REGION,
        grid_points,
    )?;
    Ok(CircularAdfs {
        n,
        virtual_noise,
        plan,
        snr: report,
        virtual_noise_coupling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::lockin_sequence;
    use crate::wavefield::eval_field;

    #[test]
    fn single_wave_placement() {
        let w = PlaneWave::new(1.0, vec![1.0, 0.0], 0.0).unwrap();
        let s = placement(&[w.clone()], &[0.0, 0.0]).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.position(1)[0] - PI).abs() < 1e-15);
        let lock = lockin_sequence(1.0, 2.0 * PI, 2).unwrap();
        for phi in [0.0, 0.7, 2.0, 4.0] {
            let probe: MonochromaticField = PlaneWave::new(1.0, vec![1.0, 0.0], phi).unwrap().into();
            let g = coupling_strength(&SignString::all_ones(2), &lock, &s, &probe).unwrap();
            assert!(g.abs() < 1e-12);
        }
    }

    #[test]
    fn three_wave_placement_cancels_fields() {
        let noise: Vec<PlaneWave> = [0.3, 1.9, 4.0]
            .iter()
            .map(|&a| PlaneWave::from_direction(1.0, 1.0, a, a * 0.5).unwrap())
            .collect();
        let s = placement(&noise, &[0.2, -0.1]).unwrap();
        assert_eq!(s.len(), 8);
        for w in &noise {
            let f: MonochromaticField = w.into();
            for k in 0..50 {
                let t = k as f64 * 0.13;
                let total: f64 = s.positions().iter().map(|x| eval_field(&f, x, t)).sum();
                assert!(total.abs() < 1e-12);
            }
        }
        let zero = PlaneWave {
            omega: 1.0,
            kvec: vec![0.0, 0.0],
            phi: 0.0,
            phase_known: true,
        };
        assert_eq!(placement(&[zero], &[0.0, 0.0]), Err(Error::ZeroWaveVector));
    }

    #[test]
    fn snr_flags_degenerate_controls() {
        let s = SensorArray::circle(2, 1.0, 0.0).unwrap();
        let c = ControlSequence::constant(0.0, 2, 2.0 * PI).unwrap();
        let sig: MonochromaticField = PlaneWave::new(1.0, vec![1.0, 0.0], 0.0).unwrap().into();
        let fam = ProbeFamily::Direction {
            omega: 1.0,
            k_mag: 1.0,
            phi: 0.0,
        };
        let r = snr(&SignString::all_ones(2), &c, &s, &sig, &fam, NOISE_REGION, 16).unwrap();
        assert_eq!(r.flag, SnrFlag::Undefined);
    }

    #[test]
    fn circular_small_n() {
        let r = circular_adfs(2, 256).unwrap();
        assert!(r.snr.snr > 0.3 && r.snr.snr < 3.0);
        let r = circular_adfs(8, 256).unwrap();
        assert!(r.virtual_noise_coupling < 1e-9 * r.plan.signal_coupling_fast.abs());
        assert!(circular_adfs(5, 16).is_err());
    }
}
