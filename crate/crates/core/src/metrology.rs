//! Quantum and classical Fisher information for sensor states that are
//! diagonal across DFS classes.
//!
//! States are indexed by masks: bit `i` of the mask set means `z_i = −1`,
//! i.e. qubit `i` in `|1⟩`. All QFIs use the normalization `F = 4 Var(g)`
//! for pure states.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::control::ControlSequence;
use crate::dfsbuild::DfsPartition;
use crate::optim::{multistart_maximize, NelderMead};
use crate::wavefield::{phasor_at, MonochromaticField, SensorArray};
use crate::{Error, Result};

/// Largest `n` handled by the classical Fisher information routines.
pub const CFI_N_MAX: usize = 14;

const NORM_TOL: f64 = 1e-10;
const PROB_FLOOR: f64 = 1e-14;
const PHASE_GRID: usize = 64;

/// `4 g² |d|²` for a GHZ state on `±z` with dephasing factor `d`.
pub fn qfi_ghz(g_signal: f64, d: Complex64) -> f64 {
    4.0 * g_signal * g_signal * d.norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmplitudeDistribution {
    Gaussian { sigma: f64 },
    PointMass { beta: f64 },
    /// Limit of very broad amplitude distributions: any residual coupling dephases completely.
    StrongNoise,
}

impl AmplitudeDistribution {
    /// `E[e^{−iβg}]`.
    pub fn characteristic(&self, g: f64) -> Complex64 {
        match *self {
            AmplitudeDistribution::Gaussian { sigma } => Complex64::new((-0.5 * sigma * sigma * g * g).exp(), 0.0),
            AmplitudeDistribution::PointMass { beta } => Complex64::from_polar(1.0, -beta * g),
            AmplitudeDistribution::StrongNoise => {
                if g.abs() <= 1e-9 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseTerm {
    pub distribution: AmplitudeDistribution,
    pub phase_known: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ResidualCoupling {
    Known(f64),
    /// Couplings to the cosine and sine quadratures of a wave with uniform random phase.
    Unknown { cos: f64, sin: f64 },
}

/// `Π_j E[e^{−iβ_j g_j}]`; unknown phases are averaged on a uniform grid.
pub fn dephasing_factor(noise: &[NoiseTerm], residual: &[ResidualCoupling]) -> Result<Complex64> {
    if noise.len() != residual.len() {
        return Err(Error::LengthMismatch {
            expected: noise.len(),
            got: residual.len(),
        });
    }
    let mut d = Complex64::new(1.0, 0.0);
    for (term, r) in noise.iter().zip(residual) {
        if let AmplitudeDistribution::Gaussian { sigma } = term.distribution {
            if sigma < 0.0 {
                return Err(Error::OutOfRange {
                    what: "sigma",
                    value: sigma,
                });
            }
        }
        d *= match *r {
            ResidualCoupling::Known(g) => term.distribution.characteristic(g),
            ResidualCoupling::Unknown { cos, sin } => {
                (0..PHASE_GRID)
                    .map(|k| {
                        let phi = 2.0 * PI * k as f64 / PHASE_GRID as f64;
                        term.distribution.characteristic(cos * phi.cos() + sin * phi.sin())
                    })
                    .sum::<Complex64>()
                    / PHASE_GRID as f64
            }
        };
    }
    Ok(d)
}

/// Generator eigenvalues `g_z = Σ_i z_i a_i` of a linear coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorCouplings {
    pub per_sensor: Vec<f64>,
}

impl SensorCouplings {
    pub fn new(per_sensor: Vec<f64>) -> Self {
        Self { per_sensor }
    }

    /// `a_i = Re(c_i 𝔉(C_i)(ω))` for a monochromatic probe.
    pub fn from_probe(control: &ControlSequence, sensors: &SensorArray, probe: &MonochromaticField) -> Result<Self> {
        if control.n() != sensors.len() {
            return Err(Error::LengthMismatch {
                expected: sensors.len(),
                got: control.n(),
            });
        }
        Ok(Self::new(
            sensors
                .positions()
                .iter()
                .zip(control.shapes())
                .map(|(x, s)| (phasor_at(probe, x) * s.fourier_transform(control.duration(), probe.omega)).re)
                .collect(),
        ))
    }

    pub fn n(&self) -> usize {
        self.per_sensor.len()
    }

    pub fn g(&self, mask: u64) -> f64 {
        self.per_sensor
            .iter()
            .enumerate()
            .map(|(i, a)| if mask >> i & 1 == 1 { -a } else { *a })
            .sum()
    }

    pub fn concat(&self, other: &SensorCouplings) -> Self {
        let mut v = self.per_sensor.clone();
        v.extend_from_slice(&other.per_sensor);
        Self::new(v)
    }
}

/// `4 Σ_i a_i²`: QFI of `|+⟩^{⊗n}` without noise.
pub fn qfi_product_plus(control: &ControlSequence, sensors: &SensorArray, probe: &MonochromaticField) -> Result<f64> {
    let c = SensorCouplings::from_probe(control, sensors, probe)?;
    Ok(4.0 * c.per_sensor.iter().map(|a| a * a).sum::<f64>())
}

/// Pure state supported on a set of basis strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub p: f64,
    pub members: Vec<u64>,
    pub amplitudes: Vec<Complex64>,
}

impl Block {
    fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|a| a.norm_sqr())
    }

    /// `E[g]` and `E[g²]` under `|c_z|²`.
    fn moments(&self, g: &dyn Fn(u64) -> f64) -> (f64, f64) {
        self.members
            .iter()
            .zip(self.weights())
            .fold((0.0, 0.0), |(m1, m2), (&z, w)| {
                let gz = g(z);
                (m1 + w * gz, m2 + w * gz * gz)
            })
    }
}

/// Block-diagonal mixture `Σ_κ p_κ |Ψ_κ⟩⟨Ψ_κ|` with blocks on disjoint DFS classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalStateMixture {
    pub n: usize,
    pub blocks: Vec<Block>,
}

impl DiagonalStateMixture {
    pub fn new(n: usize, blocks: Vec<Block>) -> Result<Self> {
        let total: f64 = blocks.iter().map(|b| b.p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(total));
        }
        for b in &blocks {
            if b.members.len() != b.amplitudes.len() {
                return Err(Error::LengthMismatch {
                    expected: b.members.len(),
                    got: b.amplitudes.len(),
                });
            }
            let norm: f64 = b.weights().sum();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(norm));
            }
        }
        Ok(Self { n, blocks })
    }

    /// Single pure block.
    pub fn pure(n: usize, members: Vec<u64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(
            n,
            vec![Block {
                p: 1.0,
                members,
                amplitudes,
            }],
        )
    }

    /// `(|z⟩ + |−z⟩)/√2`.
    pub fn ghz(n: usize, z_mask: u64) -> Result<Self> {
        let neg = !z_mask & ((1u64 << n) - 1);
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::pure(n, vec![z_mask, neg], vec![a, a])
    }
}

/// Amplitudes `⟨z|Ψ⟩` of a product state, indexed by mask.
pub fn product_state(qubits: &[[Complex64; 2]]) -> Vec<Complex64> {
    let n = qubits.len();
    (0..1u64 << n)
        .map(|m| {
            (0..n)
                .map(|i| qubits[i][(m >> i & 1) as usize])
                .product()
        })
        .collect()
}

pub fn plus_state(n: usize) -> Vec<Complex64> {
    let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    product_state(&vec![[a, a]; n])
}

/// Strong-noise projection of `initial` onto the classes of `partition`.
pub fn twirl(initial: &[Complex64], partition: &DfsPartition) -> Result<DiagonalStateMixture> {
    let n = partition.n;
    if initial.len() != 1usize << n {
        return Err(Error::LengthMismatch {
            expected: 1 << n,
            got: initial.len(),
        });
    }
    let norm: f64 = initial.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let blocks = partition
        .classes
        .iter()
        .filter_map(|c| {
            let amps: Vec<Complex64> = c.members.iter().map(|&m| initial[m as usize]).collect();
            let p: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            (p > 0.0).then(|| Block {
                p,
                members: c.members.clone(),
                amplitudes: amps.iter().map(|a| a / p.sqrt()).collect(),
            })
        })
        .collect::<Vec<_>>();
    let total: f64 = blocks.iter().map(|b| b.p).sum();
    let blocks = blocks
        .into_iter()
        .map(|mut b| {
            b.p /= total;
            b
        })
        .collect();
    DiagonalStateMixture::new(n, blocks)
}

/// `Σ_κ 4 p_κ Var_κ(g)`.
pub fn qfi_mixed_via_dfs(mixture: &DiagonalStateMixture, g: &dyn Fn(u64) -> f64) -> f64 {
    mixture
        .blocks
        .iter()
        .map(|b| {
            let (m1, m2) = b.moments(g);
            4.0 * b.p * (m2 - m1 * m1).max(0.0)
        })
        .sum()
}

/// Covariance-form QFIM `4[E(g_w g_w′) − E(g_w)E(g_w′)]` of a pure state.
pub fn qfim_within_dfs(
    members: &[u64],
    amplitudes: &[Complex64],
    signals: &[&dyn Fn(u64) -> f64],
) -> Result<DMatrix<f64>> {
    if members.len() != amplitudes.len() {
        return Err(Error::LengthMismatch {
            expected: members.len(),
            got: amplitudes.len(),
        });
    }
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let k = signals.len();
    let g: Vec<Vec<f64>> = signals.iter().map(|f| members.iter().map(|&z| f(z)).collect()).collect();
    let w: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let mean: Vec<f64> = g.iter().map(|gs| gs.iter().zip(&w).map(|(a, b)| a * b).sum()).collect();
    Ok(DMatrix::from_fn(k, k, |a, b| {
        let e: f64 = (0..members.len()).map(|z| w[z] * g[a][z] * g[b][z]).sum();
        4.0 * (e - mean[a] * mean[b])
    }))
}

/// Per-qubit rank-1 projective measurement with Bloch angles `(θ_i, φ_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementConfig {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

impl MeasurementConfig {
    pub fn new(theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if theta.len() != phi.len() {
            return Err(Error::LengthMismatch {
                expected: theta.len(),
                got: phi.len(),
            });
        }
        Ok(Self {
            theta: theta.iter().map(|t| fold_theta(*t)).collect(),
            phi: theta
                .iter()
                .zip(&phi)
                .map(|(t, p)| fold_phi(*t, *p))
                .collect(),
        })
    }

    /// Every qubit measured in the equatorial basis at azimuth `phi`.
    pub fn equatorial(phi: Vec<f64>) -> Self {
        Self {
            theta: vec![PI / 2.0; phi.len()],
            phi: phi.iter().map(|p| p.rem_euclid(2.0 * PI)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    fn from_flat(x: &[f64]) -> Self {
        let n = x.len() / 2;
        Self::new(x[..n].to_vec(), x[n..].to_vec()).expect("equal halves")
    }

    /// Rows `⟨m_0|`, `⟨m_1|` in the `|0⟩, |1⟩` basis for each qubit.
    fn unitaries(&self) -> Vec<[[Complex64; 2]; 2]> {
        self.theta
            .iter()
            .zip(&self.phi)
            .map(|(&t, &p)| {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                let e = Complex64::from_polar(1.0, -p);
                [
                    [Complex64::new(c, 0.0), e * s],
                    [Complex64::new(s, 0.0), -e * c],
                ]
            })
            .collect()
    }
}

/// Map any real θ onto `[0, π]`, adjusting φ so the projector pair is unchanged up to labels.
fn fold_theta(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        2.0 * PI - r
    } else {
        r
    }
}

fn fold_phi(t: f64, p: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        (p + PI).rem_euclid(2.0 * PI)
    } else {
        p.rem_euclid(2.0 * PI)
    }
}

/// In-place application of one 2×2 matrix per qubit to an amplitude vector.
fn apply_local(v: &mut [Complex64], u: &[[[Complex64; 2]; 2]]) {
    for (i, m) in u.iter().enumerate() {
        let bit = 1usize << i;
        for base in 0..v.len() {
            if base & bit != 0 {
                continue;
            }
            let (a, b) = (v[base], v[base | bit]);
            v[base] = m[0][0] * a + m[0][1] * b;
            v[base | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn apply_local_real(v: &mut [f64], u: &[[[f64; 2]; 2]]) {
    for (i, m) in u.iter().enumerate() {
        let bit = 1usize << i;
        for base in 0..v.len() {
            if base & bit != 0 {
                continue;
            }
            let (a, b) = (v[base], v[base | bit]);
            v[base] = m[0][0] * a + m[0][1] * b;
            v[base | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Outcome probabilities `p(o|θ)` and `∂_θ p(o|θ)`, indexed by outcome mask
/// (bit `i` set meaning qubit `i` gave outcome `m_1`).
pub fn outcome_probabilities(
    mixture: &DiagonalStateMixture,
    g: &dyn Fn(u64) -> f64,
    theta: f64,
    config: &MeasurementConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = mixture.n;
    if n > CFI_N_MAX {
        return Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap: CFI_N_MAX,
        });
    }
    if config.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: config.n(),
        });
    }
    let dim = 1usize << n;
    let u = config.unitaries();
    let mut p = vec![0.0; dim];
    let mut dp = vec![0.0; dim];
    let mut singles = vec![0.0; dim];
    let mut any_single = false;
    for b in &mixture.blocks {
        if b.members.len() == 1 {
            singles[b.members[0] as usize] += b.p;
            any_single = true;
            continue;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        for (&z, c) in b.members.iter().zip(&b.amplitudes) {
            let gz = g(z);
            let a = c * Complex64::from_polar(1.0, -theta * gz);
            v[z as usize] = a;
            w[z as usize] = a * Complex64::new(0.0, -gz);
        }
        apply_local(&mut v, &u);
        apply_local(&mut w, &u);
        for o in 0..dim {
            p[o] += b.p * v[o].norm_sqr();
            dp[o] += b.p * 2.0 * (v[o].conj() * w[o]).re;
        }
    }
    if any_single {
        let stochastic: Vec<[[f64; 2]; 2]> = u
            .iter()
            .map(|m| [[m[0][0].norm_sqr(), m[0][1].norm_sqr()], [m[1][0].norm_sqr(), m[1][1].norm_sqr()]])
            .collect();
        apply_local_real(&mut singles, &stochastic);
        p.iter_mut().zip(&singles).for_each(|(a, b)| *a += b);
    }
    Ok((p, dp))
}

/// `Σ_o (∂_θ p)² / p`, skipping outcomes with `p < 1e−14`.
pub fn cfi_product_measurement(
    mixture: &DiagonalStateMixture,
    g: &dyn Fn(u64) -> f64,
    theta: f64,
    config: &MeasurementConfig,
) -> Result<f64> {
    let (p, dp) = outcome_probabilities(mixture, g, theta, config)?;
    Ok(p.iter()
        .zip(&dp)
        .filter(|(p, _)| **p >= PROB_FLOOR)
        .map(|(p, d)| d * d / p)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfiOptions {
    pub restarts: usize,
    pub budget: usize,
    pub seed: u64,
    pub theta: f64,
}

impl Default for CfiOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            budget: 2000,
            seed: 0,
            theta: 0.0,
        }
    }
}

/// Best CFI found over per-qubit projective measurements; a lower bound on the optimum.
pub fn optimize_cfi(
    mixture: &DiagonalStateMixture,
    g: &(dyn Fn(u64) -> f64 + Sync),
    opts: CfiOptions,
) -> Result<(MeasurementConfig, f64)> {
    let n = mixture.n;
    if n > CFI_N_MAX {
        return Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap: CFI_N_MAX,
        });
    }
    let objective = |x: &[f64]| {
        cfi_product_measurement(mixture, g, opts.theta, &MeasurementConfig::from_flat(x)).unwrap_or(f64::NEG_INFINITY)
    };
    let mut bounds = vec![(0.0, PI); n];
    bounds.extend(vec![(0.0, 2.0 * PI); n]);
    let nm = NelderMead {
        max_evals: opts.budget,
        initial_step: 0.6,
        ftol: 1e-14,
    };
    let (x, v) = multistart_maximize(&objective, &bounds, &[], opts.restarts, nm, opts.seed);
    Ok((MeasurementConfig::from_flat(&x), v))
}
