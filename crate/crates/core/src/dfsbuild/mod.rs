//! DFS construction by orthogonalizing the signal against the noise.
//!
//! The protected string `z` is absorbed into the rows (`r ↦ z∘r`), so the
//! orthogonalization runs under the plain positive-definite product. Any
//! control `u` orthogonal to every `z∘r_j` has `g_z(noise_j) = 0`, and among
//! those the projection of `z∘s` maximizes `g_z(signal)`. For `z = all-ones`
//! this is the ordinary projection of the signal row.

mod affine;
mod placement;

pub use affine::{approx_dfs, enumerate_affine_dfs, ApproxDfs, DfsClass, DfsPartition, PartitionSummary, N_MAX};
pub use placement::{circular_adfs, linspace, placement, snr, CircularAdfs, SnrFlag, SnrReport};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::control::{
    coupling_to_row, phasor_product, sampled_product, ControlSequence, ControlShape,
};
use crate::wavefield::{
    build_field_matrix, phasor_at, FieldMatrix, FieldMode, Role, Row, Scenario, SignString, Wave,
};
use crate::{Error, Result};

/// Relative size below which a projected row counts as linearly dependent.
pub const DROP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalizationResult {
    /// Orthonormal basis of the (z-absorbed) noise rows.
    pub ortho_rows: Vec<Row>,
    /// Indices of noise rows dropped as dependent on earlier ones.
    pub dropped: Vec<usize>,
    /// Orthogonal signal component; `⟨s_perp, r_j⟩_z = 0` for every noise row.
    pub s_perp: Row,
    /// `‖s_perp‖²`, which is also `⟨s, s_perp⟩_z`.
    pub residual_norm: f64,
    /// `‖z∘s‖²` before projection.
    pub signal_norm: f64,
}

impl OrthogonalizationResult {
    /// `s_perp` scaled to unit norm.
    pub fn s_perp_unit(&self) -> Row {
        scaled(&self.s_perp, 1.0 / self.residual_norm.sqrt())
    }

    pub fn is_degenerate(&self) -> bool {
        self.residual_norm <= (DROP_TOL * DROP_TOL) * self.signal_norm
    }
}

fn scaled(row: &Row, a: f64) -> Row {
    match row {
        Row::Phasor(c) => Row::Phasor(c.iter().map(|v| v * a).collect()),
        Row::Sampled(s) => Row::Sampled(s.iter().map(|v| v.iter().map(|x| x * a).collect()).collect()),
    }
}

fn z_weighted(row: &Row, z: &SignString) -> Row {
    match row {
        Row::Phasor(c) => Row::Phasor(c.iter().zip(z.iter()).map(|(v, zi)| v * zi).collect()),
        Row::Sampled(s) => Row::Sampled(
            s.iter()
                .zip(z.iter())
                .map(|(v, zi)| v.iter().map(|x| x * zi).collect())
                .collect(),
        ),
    }
}

/// `a ← a − s b`.
fn sub_scaled(a: &mut Row, s: f64, b: &Row) {
    match (a, b) {
        (Row::Phasor(x), Row::Phasor(y)) => x.iter_mut().zip(y).for_each(|(u, v)| *u -= v * s),
        (Row::Sampled(x), Row::Sampled(y)) => x
            .iter_mut()
            .zip(y)
            .for_each(|(u, v)| u.iter_mut().zip(v).for_each(|(p, q)| *p -= q * s)),
        _ => unreachable!("rows normalized to one kind"),
    }
}

struct Product {
    duration: f64,
    ones: SignString,
}

impl Product {
    fn dot(&self, a: &Row, b: &Row) -> f64 {
        match (a, b) {
            (Row::Phasor(x), Row::Phasor(y)) => phasor_product(x, y, &self.ones, self.duration),
            (Row::Sampled(x), Row::Sampled(y)) => sampled_product(x, y, &self.ones, self.duration),
            _ => unreachable!("rows normalized to one kind"),
        }
    }

    /// Two passes of modified Gram–Schmidt against an orthonormal basis.
    fn project_out(&self, v: &mut Row, basis: &[Row]) {
        for _ in 0..2 {
            for q in basis {
                let c = self.dot(v, q);
                sub_scaled(v, c, q);
            }
        }
    }
}

/// All rows as one kind: phasor if possible, otherwise sampled on the shared grid.
fn uniform_rows(f: &FieldMatrix) -> Vec<Row> {
    match (f.grid_len(), f.omega()) {
        (Some(points), omega) => f
            .rows()
            .iter()
            .map(|r| match r {
                Row::Sampled(_) => r.clone(),
                Row::Phasor(_) => r.to_sampled(omega.expect("validated"), f.duration(), points),
            })
            .collect(),
        (None, _) => f.rows().to_vec(),
    }
}

pub fn orthogonalize(f: &FieldMatrix, z: &SignString) -> Result<OrthogonalizationResult> {
    if z.len() != f.n() {
        return Err(Error::LengthMismatch {
            expected: f.n(),
            got: z.len(),
        });
    }
    let product = Product {
        duration: f.duration(),
        ones: SignString::all_ones(f.n()),
    };
    let rows: Vec<Row> = uniform_rows(f).iter().map(|r| z_weighted(r, z)).collect();
    let (noise, signal) = rows.split_at(rows.len() - 1);

    let mut basis: Vec<Row> = Vec::new();
    let mut dropped = Vec::new();
    for (j, r) in noise.iter().enumerate() {
        let norm0 = product.dot(r, r);
        let mut v = r.clone();
        product.project_out(&mut v, &basis);
        let norm = product.dot(&v, &v);
        if norm <= DROP_TOL * DROP_TOL * norm0 || norm0 == 0.0 {
            dropped.push(j);
            continue;
        }
        basis.push(scaled(&v, 1.0 / norm.sqrt()));
    }
    let mut s = signal[0].clone();
    let signal_norm = product.dot(&s, &s);
    product.project_out(&mut s, &basis);
    let residual_norm = product.dot(&s, &s);
    Ok(OrthogonalizationResult {
        ortho_rows: basis,
        dropped,
        s_perp: s,
        residual_norm,
        signal_norm,
    })
}

/// Fast control (and slow control where it exists) protecting `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfsPlan {
    pub z: SignString,
    pub fast: ControlSequence,
    /// Rectangular-wave control; only available for phasor signal components.
    pub slow: Option<ControlSequence>,
    pub amplitudes: Vec<f64>,
    /// `ϕ_i` in `A_i cos(ωt + ϕ_i)`, in `(−π, π]`.
    pub phases: Vec<f64>,
    pub signal_coupling_fast: f64,
    pub signal_coupling_slow: Option<f64>,
    pub max_noise_coupling_fast: f64,
    pub max_noise_coupling_slow: Option<f64>,
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorControl {
    pub amplitude: f64,
    pub phase: f64,
    pub gamma: f64,
    pub flip_times: Vec<f64>,
}

impl DfsPlan {
    pub fn duration(&self) -> f64 {
        self.fast.duration()
    }

    /// Per-sensor amplitude, phase, slow-control half width and flip times.
    pub fn sensor_controls(&self) -> Vec<SensorControl> {
        let slow = self.slow.as_ref();
        (0..self.amplitudes.len())
            .map(|i| {
                let (gamma, flip_times) = match slow.map(|s| &s.shapes()[i]) {
                    Some(shape @ ControlShape::Rect { gamma, .. }) => {
                        (*gamma, shape.flip_times(self.duration()))
                    }
                    _ => (f64::NAN, Vec::new()),
                };
                SensorControl {
                    amplitude: self.amplitudes[i],
                    phase: self.phases[i],
                    gamma,
                    flip_times,
                }
            })
            .collect()
    }

    pub fn slow_to_fast_ratio(&self) -> Option<f64> {
        self.signal_coupling_slow.map(|s| s / self.signal_coupling_fast)
    }
}

fn wrap_pi(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Build fast and slow controls from an already assembled field matrix.
pub fn plan_from_field_matrix(f: &FieldMatrix, z: &SignString) -> Result<DfsPlan> {
    let ortho = orthogonalize(f, z)?;
    if ortho.is_degenerate() {
        return Err(Error::DegenerateSignal {
            residual: (ortho.residual_norm / ortho.signal_norm.max(f64::MIN_POSITIVE)).sqrt(),
        });
    }
    let t = f.duration();
    let (fast, slow, amplitudes, phases) = match &ortho.s_perp {
        Row::Phasor(u) => {
            let omega = f.omega().expect("phasor rows carry omega");
            let max = u.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let amplitudes: Vec<f64> = u.iter().map(|c| (c.norm() / max).min(1.0)).collect();
            let phases: Vec<f64> = u.iter().map(|c| wrap_pi(-c.arg())).collect();
            let fast = ControlSequence::new(
                amplitudes
                    .iter()
                    .zip(&phases)
                    .map(|(&amplitude, &phase)| ControlShape::Sinusoid {
                        amplitude,
                        phase,
                        omega,
                    })
                    .collect(),
                t,
            )?;
            let slow = ControlSequence::new(
                amplitudes
                    .iter()
                    .zip(&phases)
                    .map(|(&a, &phase)| ControlShape::Rect {
                        gamma: a.clamp(0.0, 1.0).asin(),
                        phase,
                        omega,
                    })
                    .collect(),
                t,
            )?;
            (fast, Some(slow), amplitudes, phases)
        }
        Row::Sampled(series) => {
            let max = series
                .iter()
                .flat_map(|s| s.iter().map(|v| v.abs()))
                .fold(0.0, f64::max);
            let shapes = series
                .iter()
                .map(|s| ControlShape::Sampled {
                    values: s.iter().map(|v| (v / max).clamp(-1.0, 1.0)).collect(),
                })
                .collect();
            let amplitudes = series
                .iter()
                .map(|s| s.iter().map(|v| v.abs()).fold(0.0, f64::max) / max)
                .collect();
            (ControlSequence::new(shapes, t)?, None, amplitudes, vec![f64::NAN; series.len()])
        }
    };

    let couple = |c: &ControlSequence, row: &Row| coupling_to_row(z, c, row, f.omega());
    let max_noise = |c: &ControlSequence| -> Result<f64> {
        f.noise_rows()
            .iter()
            .map(|r| couple(c, r).map(f64::abs))
            .try_fold(0.0, |m, g| g.map(|g| f64::max(m, g)))
    };
    let signal_coupling_fast = couple(&fast, f.signal_row())?;
    let max_noise_coupling_fast = max_noise(&fast)?;
    let (signal_coupling_slow, max_noise_coupling_slow) = match &slow {
        Some(s) => (Some(couple(s, f.signal_row())?), Some(max_noise(s)?)),
        None => (None, None),
    };
    Ok(DfsPlan {
        z: z.clone(),
        fast,
        slow,
        amplitudes,
        phases,
        signal_coupling_fast,
        signal_coupling_slow,
        max_noise_coupling_fast,
        max_noise_coupling_slow,
        omega: f.omega(),
    })
}

pub fn build_dfs_plan(scenario: &Scenario, z: &SignString, mode: &FieldMode) -> Result<DfsPlan> {
    let f = build_field_matrix(&scenario.waves, &scenario.sensors, scenario.duration(), mode)?;
    plan_from_field_matrix(&f, z)
}

/// Field matrix whose noise rows are `z^l ∘ noise_j` for every requested state,
/// followed by the unweighted signal row. Orthogonalize it with `z = all-ones`.
pub fn stack_field_matrix(
    scenario: &Scenario,
    states: &[SignString],
    unknown_phases: bool,
) -> Result<FieldMatrix> {
    for (i, a) in states.iter().enumerate() {
        if a.len() != scenario.n() {
            return Err(Error::LengthMismatch {
                expected: scenario.n(),
                got: a.len(),
            });
        }
        if states[..i].contains(a) {
            return Err(Error::DuplicateState);
        }
    }
    let signal = scenario.signal()?;
    let sensors = scenario.sensors.positions();
    let local = |f: &crate::wavefield::MonochromaticField| -> Vec<Complex64> {
        sensors.iter().map(|x| phasor_at(f, x)).collect()
    };
    let mut noise_rows: Vec<Vec<Complex64>> = scenario.noise().map(local).collect();
    if unknown_phases {
        let quadrature: Vec<Vec<Complex64>> = noise_rows
            .iter()
            .map(|r| r.iter().map(|c| c * Complex64::new(0.0, -1.0)).collect())
            .collect();
        noise_rows.extend(quadrature);
    }
    let mut rows = Vec::new();
    for zl in states {
        for r in &noise_rows {
            rows.push(Row::Phasor(r.iter().zip(zl.iter()).map(|(c, s)| c * s).collect()));
        }
    }
    rows.push(Row::Phasor(local(signal)));
    let mut roles = vec![Role::Noise; rows.len() - 1];
    roles.push(Role::Signal);
    FieldMatrix::new(rows, roles, scenario.duration(), Some(signal.omega))
}

/// Plan that decouples every state in `states` from every noise wave.
pub fn build_stacked_plan(scenario: &Scenario, states: &[SignString], unknown_phases: bool) -> Result<DfsPlan> {
    let f = stack_field_matrix(scenario, states, unknown_phases)?;
    plan_from_field_matrix(&f, &SignString::all_ones(scenario.n()))
}

/// Convenience: scenario waves as `Wave`s with the given roles.
pub fn waves(noise: impl IntoIterator<Item = Wave>, signal: Wave) -> Vec<Wave> {
    let mut w: Vec<Wave> = noise.into_iter().collect();
    w.push(signal);
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::coupling_strength;
    use crate::wavefield::{PlaneWave, SensorArray};
    use approx::assert_relative_eq;

    fn scenario(n: usize, d: usize, seed: u64) -> Scenario {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sensors = SensorArray::new((0..n).map(|_| vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]).collect()).unwrap();
        let mut w: Vec<Wave> = (0..d)
            .map(|_| {
                let a: f64 = rng.gen_range(0.0..2.0 * PI);
                Wave::noise(PlaneWave::from_direction(1.0, 1.0, a, rng.gen_range(0.0..2.0 * PI)).unwrap())
            })
            .collect();
        w.push(Wave::signal(PlaneWave::from_direction(1.0, 1.0, 0.3, 0.0).unwrap()));
        Scenario::new(sensors, w, 1.0, 2).unwrap()
    }

    #[test]
    fn dependent_signal_is_degenerate() {
        let s = scenario(4, 2, 7);
        let noise: Vec<Wave> = s.waves.iter().filter(|w| w.role == Role::Noise).cloned().collect();
        let dup = Wave::signal(noise[0].field.clone());
        let mut w = noise.clone();
        w.push(dup);
        let s2 = Scenario::new(s.sensors.clone(), w, 1.0, 2).unwrap();
        let f = build_field_matrix(&s2.waves, &s2.sensors, s2.duration(), &FieldMode::KnownPhases).unwrap();
        let o = orthogonalize(&f, &SignString::all_ones(4)).unwrap();
        assert!(o.is_degenerate());
        assert!(matches!(
            build_dfs_plan(&s2, &SignString::all_ones(4), &FieldMode::KnownPhases),
            Err(Error::DegenerateSignal { .. })
        ));
    }

    #[test]
    fn plan_decouples_noise_and_keeps_slow_ratio() {
        for seed in 0..10 {
            let s = scenario(6, 3, seed);
            let z = SignString::all_ones(6);
            let plan = build_dfs_plan(&s, &z, &FieldMode::KnownPhases).unwrap();
            assert!(plan.max_noise_coupling_fast <= 1e-9 * plan.signal_coupling_fast.abs());
            assert!(plan.max_noise_coupling_slow.unwrap() <= 1e-9 * plan.signal_coupling_fast.abs());
            assert_relative_eq!(plan.slow_to_fast_ratio().unwrap(), 4.0 / PI, max_relative = 1e-9);
            assert_relative_eq!(plan.amplitudes.iter().cloned().fold(0.0, f64::max), 1.0);
        }
    }

    #[test]
    fn plan_for_non_trivial_z() {
        let s = scenario(5, 2, 11);
        let z = SignString::new(vec![1, -1, 1, 1, -1]).unwrap();
        let plan = build_dfs_plan(&s, &z, &FieldMode::UnknownPhases).unwrap();
        for w in s.noise() {
            for phi in [0.0, 1.0, 2.5] {
                let mut probe = w.clone();
                if let crate::wavefield::Profile::Plane { phi: p, .. } = &mut probe.profile {
                    *p = phi;
                }
                let g = coupling_strength(&z, &plan.fast, &s.sensors, &probe).unwrap();
                assert!(g.abs() < 1e-9 * plan.signal_coupling_fast.abs());
            }
        }
        assert!(plan.signal_coupling_fast > 0.0);
    }

    #[test]
    fn stacked_single_state_matches_plain_plan() {
        let s = scenario(5, 2, 3);
        let z = SignString::all_ones(5);
        let a = build_dfs_plan(&s, &z, &FieldMode::KnownPhases).unwrap();
        let b = build_stacked_plan(&s, &[z.clone()], false).unwrap();
        for (x, y) in a.amplitudes.iter().zip(&b.amplitudes) {
            assert_relative_eq!(x, y, epsilon = 1e-12);
        }
        assert_eq!(
            stack_field_matrix(&s, &[z.clone(), z.clone()], false),
            Err(Error::DuplicateState)
        );
    }

    #[test]
    fn stacked_plan_protects_every_state() {
        let s = scenario(8, 2, 5);
        let states = vec![
            SignString::all_ones(8),
            SignString::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap(),
            SignString::new(vec![1, -1, 1, -1, 1, -1, 1, -1]).unwrap(),
        ];
        let f = stack_field_matrix(&s, &states, false).unwrap();
        assert_eq!(f.rows().len(), 3 * 2 + 1);
        let plan = build_stacked_plan(&s, &states, false).unwrap();
        for zl in &states {
            for w in s.noise() {
                let g = coupling_strength(zl, &plan.fast, &s.sensors, w).unwrap();
                assert!(g.abs() < 1e-9 * plan.signal_coupling_fast.abs());
            }
        }
    }
}
