//! Entangled versus separable sensing on a growing circular array.
//!
//! Sensors sit on a circle of radius 10π with a horizontal base, the signal
//! arrives along 45° and `m − 1` known-phase noise waves are drawn from 19
//! directions in the opposite half plane. The entangled strategy protects
//! GHZ on the whole array; the separable one splits the array into groups
//! of `m` sensors, each with its own DFS control, prepares `|+⟩` on every
//! sensor and suffers the strong-noise twirl.

use std::f64::consts::PI;

use anyhow::{bail, Context};
use serde::Serialize;
use wavedfs::dfsbuild::{build_dfs_plan, enumerate_affine_dfs, linspace};
use wavedfs::metrology::{optimize_cfi, plus_state, qfi_mixed_via_dfs, twirl, CfiOptions, SensorCouplings};
use wavedfs::wavefield::{FieldMode, PlaneWave, Scenario, SensorArray, SignString, Wave};
use wavedfs::control::ControlSequence;

use crate::config::Scaling;

pub const RADIUS: f64 = 10.0 * PI;
pub const DELTA: f64 = PI / 20.0;
pub const CANDIDATES: usize = 19;
pub const SIGNAL_ANGLE: f64 = PI / 4.0;
pub const QFI_N_MAX: usize = 20;
pub const CFI_N_MAX: usize = 12;
pub const N_MAX: usize = 100;
const PERIODS: u32 = 1;

pub fn sensor_count(m: usize, mode: Scaling) -> usize {
    let h = m.div_ceil(2);
    match mode {
        Scaling::Minimal => 2 * h,
        Scaling::Linear => 4 * h,
        Scaling::Quadratic => 4 * h * h,
    }
}

pub fn candidate_directions() -> Vec<f64> {
    linspace(0.75 * PI + DELTA, 1.75 * PI + DELTA, CANDIDATES)
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Index of the candidate nearest to `target`; ties go to the smaller angle.
fn nearest(candidates: &[f64], taken: &[usize], target: f64) -> Option<usize> {
    (0..candidates.len()).filter(|i| !taken.contains(i)).min_by(|&a, &b| {
        angular_distance(candidates[a], target)
            .total_cmp(&angular_distance(candidates[b], target))
            .then(candidates[a].total_cmp(&candidates[b]))
    })
}

/// `d` noise directions: the one opposite the signal (shifted by δ), then
/// those nearest the signal.
pub fn noise_directions(d: usize) -> anyhow::Result<Vec<f64>> {
    let c = candidate_directions();
    if d > c.len() {
        bail!("at most {} noise directions, asked for {d}", c.len());
    }
    let mut taken = Vec::new();
    if d > 0 {
        taken.push(nearest(&c, &taken, SIGNAL_ANGLE + PI + DELTA).expect("non-empty"));
    }
    while taken.len() < d {
        taken.push(nearest(&c, &taken, SIGNAL_ANGLE).expect("enough candidates"));
    }
    Ok(taken.into_iter().map(|i| c[i]).collect())
}

pub fn scenario(m: usize, n: usize) -> anyhow::Result<Scenario> {
    if m == 0 {
        bail!("m must be positive");
    }
    let sensors = SensorArray::circle(n, RADIUS, -PI / 2.0 + PI / n as f64)?;
    let mut waves: Vec<Wave> = noise_directions(m - 1)?
        .into_iter()
        .map(|a| {
            PlaneWave::from_direction(1.0, 1.0, a, 0.0).map(Wave::noise)
        })
        .collect::<Result<_, _>>()?;
    waves.push(Wave::signal(PlaneWave::from_direction(1.0, 1.0, SIGNAL_ANGLE, 0.0)?));
    Ok(Scenario::new(sensors, waves, 1.0, PERIODS)?)
}

/// Consecutive groups of `m` sensors; the last group absorbs any remainder.
pub fn groups(n: usize, m: usize) -> Vec<Vec<usize>> {
    let k = (n / m).max(1);
    (0..k)
        .map(|j| {
            let end = if j + 1 == k { n } else { (j + 1) * m };
            (j * m..end).collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub m: usize,
    pub n: usize,
    pub group_sizes: Vec<usize>,
    pub noise_directions: Vec<f64>,
    /// GHZ QFI on the full array, couplings in units of the interaction time.
    pub qfi_ent: f64,
    pub qfi_prod: f64,
    /// Best separable-measurement CFI found; absent above the size cap.
    pub cfi_prod: Option<f64>,
    /// Whether the twirl on the whole array matched the product of group twirls.
    pub factorized: Option<bool>,
}

impl ScalingRow {
    pub fn per_sensor(&self) -> [f64; 3] {
        let n = self.n as f64;
        [self.qfi_ent / n, self.qfi_prod / n, self.cfi_prod.map_or(f64::NAN, |c| c / n)]
    }
}

struct Group {
    control: ControlSequence,
    qfi: f64,
    cfi: Option<f64>,
}

fn run_group(s: &Scenario, with_cfi: bool, opts: CfiOptions) -> anyhow::Result<Group> {
    let t = s.duration();
    let z = SignString::all_ones(s.n());
    let plan = build_dfs_plan(s, &z, &FieldMode::KnownPhases)?;
    let part = enumerate_affine_dfs(s, &plan.fast, None)?;
    let sig = SensorCouplings::from_probe(&plan.fast, &s.sensors, s.signal()?)?;
    let g = |mask: u64| sig.g(mask) / t;
    let mix = twirl(&plus_state(s.n()), &part)?;
    let qfi = qfi_mixed_via_dfs(&mix, &g);
    let cfi = if with_cfi { Some(optimize_cfi(&mix, &g, opts)?.1) } else { None };
    Ok(Group {
        control: plan.fast,
        qfi,
        cfi,
    })
}

pub fn run(m: usize, mode: Scaling, opts: CfiOptions) -> anyhow::Result<ScalingRow> {
    let n = sensor_count(m, mode);
    let s = scenario(m, n)?;
    let t = s.duration();
    let full = build_dfs_plan(&s, &SignString::all_ones(n), &FieldMode::KnownPhases)
        .with_context(|| format!("entangled plan for m={m}, n={n}"))?;
    let g_ent = full.signal_coupling_fast / t;
    let qfi_ent = 4.0 * g_ent * g_ent;

    let parts = groups(n, m);
    let with_cfi = n <= CFI_N_MAX && opts.restarts > 0;
    let mut results = Vec::new();
    for idx in &parts {
        let gs = s.restrict(idx)?;
        results.push(run_group(&gs, with_cfi, opts).with_context(|| format!("group of {} sensors", idx.len()))?);
    }
    let qfi_groups: f64 = results.iter().map(|r| r.qfi).sum();
    let cfi_prod = with_cfi.then(|| results.iter().map(|r| r.cfi.unwrap_or(0.0)).sum());

    let (qfi_prod, factorized) = if n <= QFI_N_MAX {
        let control = results[1..]
            .iter()
            .try_fold(results[0].control.clone(), |acc, r| acc.concat(&r.control))?;
        let part = enumerate_affine_dfs(&s, &control, None)?;
        let sig = SensorCouplings::from_probe(&control, &s.sensors, s.signal()?)?;
        let mix = twirl(&plus_state(n), &part)?;
        let q = qfi_mixed_via_dfs(&mix, &|mask| sig.g(mask) / t);
        (q, Some((q - qfi_groups).abs() <= 1e-9 * q.abs().max(qfi_groups.abs()).max(1e-300)))
    } else {
        (qfi_groups, None)
    };

    Ok(ScalingRow {
        m,
        n,
        group_sizes: parts.iter().map(Vec::len).collect(),
        noise_directions: s
            .noise()
            .filter_map(|f| f.plane_wave().map(|(k, _)| k[1].atan2(k[0]).rem_euclid(2.0 * PI)))
            .collect(),
        qfi_ent,
        qfi_prod,
        cfi_prod,
        factorized,
    })
}

/// Least-squares slope of `ln y` against `x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let k = x.len() as f64;
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = x.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = x.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
