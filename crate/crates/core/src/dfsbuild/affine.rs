//! Affine DFS classes: sign strings grouped by their noise coupling vector κ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::control::ControlSequence;
use crate::wavefield::{phasor_at, MonochromaticField, Scenario, SignString};
use crate::{Complex64, Error, Result};

/// Largest `n` for which all `2^n` sign strings are enumerated.
pub const N_MAX: usize = 20;

const CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfsClass {
    /// Noise couplings shared (within tolerance) by all members.
    pub kappa: Vec<f64>,
    /// Members as masks, bit `i` set meaning `z_i = −1`; sorted.
    pub members: Vec<u64>,
    /// Signal coupling of each member, parallel to `members`.
    pub signal: Vec<f64>,
}

impl DfsClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `max g − min g` of the signal coupling over the class.
    pub fn spectral_width(&self) -> f64 {
        let (lo, hi) = self
            .signal
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &g| (lo.min(g), hi.max(g)));
        if self.signal.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    pub fn sign_strings(&self, n: usize) -> Vec<SignString> {
        self.members.iter().map(|&m| SignString::from_mask(m, n)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfsPartition {
    pub n: usize,
    pub kappa_tol: f64,
    pub classes: Vec<DfsClass>,
    #[serde(skip)]
    index: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub kappa: Vec<f64>,
    pub size: usize,
    pub spectral_width: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub n: usize,
    pub kappa_tol: f64,
    pub classes: Vec<ClassSummary>,
}

impl DfsPartition {
    /// Partition with all strings in one class (no noise).
    pub fn trivial(n: usize, signal: Option<&[f64]>) -> Result<Self> {
        Self::from_contributions(n, &[], signal, 0.0)
    }

    /// Group strings by `κ_j(z) = Σ_i z_i noise[j][i]`. `signal[i]` gives the
    /// per-sensor signal contribution, if any.
    pub fn from_contributions(
        n: usize,
        noise: &[Vec<f64>],
        signal: Option<&[f64]>,
        kappa_tol: f64,
    ) -> Result<Self> {
        if n > N_MAX {
            return Err(Error::CapExceeded {
                what: "n",
                value: n,
                cap: N_MAX,
            });
        }
        if n == 0 {
            return Err(Error::Precondition("empty sensor set".into()));
        }
        let d = noise.len();
        // Per-sensor vectors: noise couplings then the signal coupling.
        let width = d + 1;
        let per_sensor: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut v: Vec<f64> = noise.iter().map(|row| row[i]).collect();
                v.push(signal.map_or(0.0, |s| s[i]));
                v
            })
            .collect();
        let half = half_sums(&per_sensor, width);
        let total = 1usize << n;
        let value = |mask: usize, j: usize| -> f64 {
            // Masks with bit 0 clear come from `half`; the rest are negations.
            if mask & 1 == 0 {
                half[(mask >> 1) * width + j]
            } else {
                -half[((!mask & (total - 1)) >> 1) * width + j]
            }
        };

        let mut groups: Vec<Vec<u32>> = vec![(0..total as u32).collect()];
        for j in 0..d {
            groups = groups
                .into_par_iter()
                .flat_map_iter(|mut g| {
                    g.sort_by(|&a, &b| value(a as usize, j).total_cmp(&value(b as usize, j)).then(a.cmp(&b)));
                    let mut out = Vec::new();
                    let mut start = 0;
                    for k in 1..=g.len() {
                        if k == g.len()
                            || value(g[k] as usize, j) - value(g[k - 1] as usize, j) > kappa_tol
                        {
                            out.push(g[start..k].to_vec());
                            start = k;
                        }
                    }
                    out
                })
                .collect();
        }
        let mut classes: Vec<DfsClass> = groups
            .into_iter()
            .map(|mut g| {
                g.sort_unstable();
                let first = g[0] as usize;
                DfsClass {
                    kappa: (0..d).map(|j| value(first, j)).collect(),
                    members: g.iter().map(|&m| m as u64).collect(),
                    signal: g.iter().map(|&m| value(m as usize, d)).collect(),
                }
            })
            .collect();
        classes.sort_by(|a, b| {
            a.kappa
                .iter()
                .zip(&b.kappa)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.members[0].cmp(&b.members[0]))
        });
        let mut index = vec![0u32; total];
        for (c, class) in classes.iter().enumerate() {
            for &m in &class.members {
                index[m as usize] = c as u32;
            }
        }
        Ok(Self {
            n,
            kappa_tol,
            classes,
            index,
        })
    }

    pub fn class_of(&self, mask: u64) -> &DfsClass {
        if self.index.is_empty() {
            return self
                .classes
                .iter()
                .find(|c| c.members.binary_search(&mask).is_ok())
                .expect("every string is in some class");
        }
        &self.classes[self.index[mask as usize] as usize]
    }

    pub fn class_index(&self, mask: u64) -> usize {
        if self.index.is_empty() {
            return self
                .classes
                .iter()
                .position(|c| c.members.binary_search(&mask).is_ok())
                .expect("every string is in some class");
        }
        self.index[mask as usize] as usize
    }

    pub fn summary(&self) -> PartitionSummary {
        PartitionSummary {
            n: self.n,
            kappa_tol: self.kappa_tol,
            classes: self
                .classes
                .iter()
                .map(|c| ClassSummary {
                    kappa: c.kappa.clone(),
                    size: c.len(),
                    spectral_width: c.spectral_width(),
                    members: (self.n <= 16).then(|| c.members.clone()),
                })
                .collect(),
        }
    }
}

/// Sums `Σ_i z_i v_i` for every string with `z_0 = +1`, ordered by `mask >> 1`.
fn half_sums(per_sensor: &[Vec<f64>], width: usize) -> Vec<f64> {
    let n = per_sensor.len();
    let half = 1usize << (n - 1);
    let mut out = vec![0.0; half * width];
    out.par_chunks_mut(CHUNK * width)
        .enumerate()
        .for_each(|(chunk, slot)| {
            let start = chunk * CHUNK;
            for (k, dst) in slot.chunks_mut(width).enumerate() {
                let m = (start + k) << 1;
                dst.iter_mut().enumerate().for_each(|(j, v)| {
                    *v = (0..n)
                        .map(|i| if m >> i & 1 == 1 { -per_sensor[i][j] } else { per_sensor[i][j] })
                        .sum();
                });
            }
        });
    out
}

/// `Re(c_i 𝔉(C_i)(ω))` per sensor, for each noise generator; unknown-phase
/// waves contribute their two quadratures.
pub(crate) fn noise_contributions(scenario: &Scenario, control: &ControlSequence) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for f in scenario.noise() {
        out.push(contributions(scenario, control, f, Complex64::new(1.0, 0.0)));
        if !f.phase_known {
            out.push(contributions(scenario, control, f, Complex64::new(0.0, -1.0)));
        }
    }
    out
}

pub(crate) fn contributions(
    scenario: &Scenario,
    control: &ControlSequence,
    field: &MonochromaticField,
    rotate: Complex64,
) -> Vec<f64> {
    scenario
        .sensors
        .positions()
        .iter()
        .zip(control.shapes())
        .map(|(x, shape)| (rotate * phasor_at(field, x) * shape.fourier_transform(control.duration(), field.omega)).re)
        .collect()
}

/// Round-off scale for κ: the largest `|c_i 𝔉(C_i)(ω)|` over all waves, so
/// contributions that cancel at a sensor do not shrink the tolerance.
fn default_tol(scenario: &Scenario, control: &ControlSequence) -> f64 {
    let t = control.duration();
    let max = scenario
        .waves
        .iter()
        .flat_map(|w| {
            scenario
                .sensors
                .positions()
                .iter()
                .zip(control.shapes())
                .map(|(x, shape)| (phasor_at(&w.field, x) * shape.fourier_transform(t, w.field.omega)).norm())
        })
        .fold(0.0, f64::max);
    if max > 0.0 {
        1e-8 * max
    } else {
        f64::EPSILON
    }
}

pub fn enumerate_affine_dfs(
    scenario: &Scenario,
    control: &ControlSequence,
    kappa_tol: Option<f64>,
) -> Result<DfsPartition> {
    let n = scenario.n();
    if n > N_MAX {
        return Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap: N_MAX,
        });
    }
    if control.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: control.n(),
        });
    }
    let noise = noise_contributions(scenario, control);
    let signal = scenario
        .signal()
        .ok()
        .map(|s| contributions(scenario, control, s, Complex64::new(1.0, 0.0)));
    let tol = kappa_tol.unwrap_or_else(|| default_tol(scenario, control));
    DfsPartition::from_contributions(n, &noise, signal.as_deref(), tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxDfs {
    pub n: usize,
    pub epsilon: f64,
    pub members: Vec<u64>,
}

impl ApproxDfs {
    pub fn contains(&self, z: &SignString) -> bool {
        self.members.binary_search(&z.mask()).is_ok()
    }
}

/// Strings whose every noise coupling is below `epsilon` (plus the default
/// round-off tolerance, so `epsilon = 0` selects the exact DFS).
pub fn approx_dfs(scenario: &Scenario, control: &ControlSequence, epsilon: f64) -> Result<ApproxDfs> {
    let n = scenario.n();
    if n > N_MAX {
        return Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap: N_MAX,
        });
    }
    let noise = noise_contributions(scenario, control);
    let tol = default_tol(scenario, control);
    let per_sensor: Vec<Vec<f64>> = (0..n).map(|i| noise.iter().map(|r| r[i]).collect()).collect();
    let d = noise.len();
    let total = 1u64 << n;
    if d == 0 {
        return Ok(ApproxDfs {
            n,
            epsilon,
            members: (0..total).collect(),
        });
    }
    let half = half_sums(&per_sensor, d);
    let mut members: Vec<u64> = half
        .par_chunks(d)
        .enumerate()
        .filter(|(_, k)| k.iter().all(|v| v.abs() <= epsilon + tol))
        .flat_map_iter(|(h, _)| {
            let m = (h as u64) << 1;
            [m, !m & (total - 1)]
        })
        .collect();
    members.sort_unstable();
    Ok(ApproxDfs {
        n,
        epsilon,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincident_sensors_three_classes() {
        let noise = vec![vec![0.7, 0.7]];
        let p = DfsPartition::from_contributions(2, &noise, None, 1e-12).unwrap();
        assert_eq!(p.classes.len(), 3);
        let sizes: Vec<usize> = p.classes.iter().map(DfsClass::len).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        assert_eq!(p.classes[1].members, vec![0b01, 0b10]);
        assert!((p.classes[0].kappa[0] + 1.4).abs() < 1e-15);
        assert_eq!(p.classes[0].members, vec![0b11]);
    }

    #[test]
    fn negation_maps_classes() {
        let noise = vec![vec![0.3, -1.1, 0.2, 0.9, 0.5], vec![1.0, 0.0, -0.4, 0.25, 0.6]];
        let signal = [0.1, 0.2, 0.3, 0.4, 0.5];
        let p = DfsPartition::from_contributions(5, &noise, Some(&signal), 1e-9).unwrap();
        assert_eq!(p.classes.iter().map(DfsClass::len).sum::<usize>(), 32);
        for c in &p.classes {
            let neg = p.class_of(!c.members[0] & 31);
            for (a, b) in c.kappa.iter().zip(&neg.kappa) {
                assert!((a + b).abs() < 1e-12);
            }
            assert_eq!(neg.len(), c.len());
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            DfsPartition::from_contributions(21, &[], None, 0.0),
            Err(Error::CapExceeded { .. })
        ));
    }
}
