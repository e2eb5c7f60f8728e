//! JSON scenario description shared by every command.

use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wavedfs::metrology::AmplitudeDistribution;
use wavedfs::wavefield::{
    FieldMode, MonochromaticField, PlaneWave, Profile, Role, Scenario, SensorArray, SignString, Wave,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "three")]
    pub periods: u32,
    #[serde(default)]
    pub sensors: Option<SensorSpec>,
    #[serde(default)]
    pub waves: Vec<WaveConfig>,
    #[serde(default)]
    pub control: ControlMode,
    /// Protected sign strings; defaults to all-ones. More than one stacks the field matrix.
    #[serde(default)]
    pub states: Vec<Vec<i8>>,
    #[serde(default)]
    pub point_symmetric: bool,
    #[serde(default)]
    pub noise_model: Option<AmplitudeDistribution>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub circular: CircularConfig,
    #[serde(default)]
    pub placement: PlacementConfig,
    #[serde(default)]
    pub scaling: ScalingConfig,
    #[serde(default)]
    pub bounds: BoundsConfig,
}

fn one() -> f64 {
    1.0
}

fn three() -> u32 {
    3
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SensorSpec {
    List(Vec<Vec<f64>>),
    Circle { circle: CircleSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub n: usize,
    #[serde(default = "one")]
    pub radius: f64,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveRole {
    Noise,
    Signal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhaseSpec {
    Value(f64),
    Word(String),
}

impl Default for PhaseSpec {
    fn default() -> Self {
        PhaseSpec::Value(0.0)
    }
}

/// A wave given by its wave vector, by direction and wave number, or by the
/// local phases `θ_i` of `cos(θ_i − ωt)` at each sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveConfig {
    pub role: WaveRole,
    #[serde(default)]
    pub k: Option<Vec<f64>>,
    #[serde(default)]
    pub direction: Option<f64>,
    #[serde(default)]
    pub k_mag: Option<f64>,
    #[serde(default)]
    pub local_phases: Option<Vec<f64>>,
    #[serde(default)]
    pub phi: PhaseSpec,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    #[default]
    Fast,
    Slow,
    Lockin,
    Wavelock,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeParameter {
    #[default]
    Direction,
    Frequency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub family: ProbeParameter,
    /// Probe wave number; defaults to the signal's.
    pub k_mag: Option<f64>,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            family: ProbeParameter::Direction,
            k_mag: None,
            from: 0.0,
            to: 2.0 * std::f64::consts::PI,
            points: 721,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircularConfig {
    pub n: Vec<usize>,
    pub grid: usize,
}

impl Default for CircularConfig {
    fn default() -> Self {
        Self {
            n: (1..=13).map(|k| 2 * k).collect(),
            grid: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlacementConfig {
    pub x0: Vec<f64>,
    pub points: usize,
}

impl Default for PlacementConfig {
    fn default() -> Self {
        Self {
            x0: vec![0.0, 0.0],
            points: 721,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    #[default]
    Minimal,
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingConfig {
    pub m: Vec<usize>,
    pub mode: Scaling,
    pub restarts: usize,
    pub budget: usize,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            m: vec![2, 4, 6],
            mode: Scaling::Minimal,
            restarts: 16,
            budget: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    pub samples: usize,
    pub n_max: usize,
    /// Largest array in the product-bound sweep over enumerated partitions.
    pub sweep_n_max: usize,
    pub distributions_per_class: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            n_max: 12,
            sweep_n_max: 10,
            distributions_per_class: 8,
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            bail!("omega must be positive, got {}", self.omega);
        }
        if self.periods == 0 {
            bail!("periods must be a positive integer");
        }
        for (j, w) in self.waves.iter().enumerate() {
            let given = [w.k.is_some(), w.direction.is_some(), w.local_phases.is_some()];
            if given.iter().filter(|g| **g).count() != 1 {
                bail!("wave {j}: give exactly one of k, direction or local_phases");
            }
            if let PhaseSpec::Word(s) = &w.phi {
                if s != "unknown" {
                    bail!("wave {j}: phi must be a number or \"unknown\", got {s:?}");
                }
                if w.role == WaveRole::Signal {
                    bail!("wave {j}: the signal phase must be known");
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    pub fn sensor_array(&self) -> anyhow::Result<SensorArray> {
        Ok(match &self.sensors {
            None => bail!("config has no sensors"),
            Some(SensorSpec::List(p)) => SensorArray::new(p.clone())?,
            Some(SensorSpec::Circle { circle }) => SensorArray::circle(circle.n, circle.radius, circle.offset)?,
        })
    }

    pub fn any_unknown_phase(&self) -> bool {
        self.waves
            .iter()
            .any(|w| w.role == WaveRole::Noise && matches!(w.phi, PhaseSpec::Word(_)))
    }

    pub fn field_mode(&self) -> anyhow::Result<FieldMode> {
        let z = self.protected_states(self.sensor_array()?.len())?;
        Ok(if self.point_symmetric {
            FieldMode::PointSymmetric(z[0].clone())
        } else if self.any_unknown_phase() {
            FieldMode::UnknownPhases
        } else {
            FieldMode::KnownPhases
        })
    }

    pub fn protected_states(&self, n: usize) -> anyhow::Result<Vec<SignString>> {
        if self.states.is_empty() {
            return Ok(vec![SignString::all_ones(n)]);
        }
        self.states
            .iter()
            .map(|s| {
                if s.len() != n {
                    bail!("protected state has {} entries for {n} sensors", s.len());
                }
                Ok(SignString::new(s.clone())?)
            })
            .collect()
    }

    pub fn scenario(&self) -> anyhow::Result<Scenario> {
        let sensors = self.sensor_array()?;
        let waves = self
            .waves
            .iter()
            .enumerate()
            .map(|(j, w)| self.wave(w, &sensors).with_context(|| format!("wave {j}")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(Scenario::new(sensors, waves, self.omega, self.periods)?)
    }

    fn wave(&self, w: &WaveConfig, sensors: &SensorArray) -> anyhow::Result<Wave> {
        let (phi, known) = match &w.phi {
            PhaseSpec::Value(v) => (*v, true),
            PhaseSpec::Word(_) => (0.0, false),
        };
        let field: MonochromaticField = if let Some(theta) = &w.local_phases {
            if theta.len() != sensors.len() {
                bail!("local_phases has {} entries for {} sensors", theta.len(), sensors.len());
            }
            MonochromaticField {
                omega: self.omega,
                profile: Profile::Tabulated(
                    sensors
                        .positions()
                        .iter()
                        .zip(theta)
                        .map(|(x, &t)| (x.clone(), Complex64::from_polar(1.0, t + phi)))
                        .collect(),
                ),
                phase_known: known,
            }
        } else {
            let kvec = match (&w.k, w.direction) {
                (Some(k), _) => k.clone(),
                (None, Some(a)) => {
                    let km = w.k_mag.unwrap_or(1.0);
                    vec![km * a.cos(), km * a.sin()]
                }
                _ => unreachable!("validated"),
            };
            let mut p = PlaneWave::new(self.omega, kvec, phi)?;
            p.phase_known = known;
            p.into()
        };
        Ok(match w.role {
            WaveRole::Noise => Wave {
                role: Role::Noise,
                field,
            },
            WaveRole::Signal => Wave {
                role: Role::Signal,
                field,
            },
        })
    }

    /// The signal as a plane wave, when it is one.
    pub fn signal_plane_wave(&self) -> anyhow::Result<PlaneWave> {
        let s = self.scenario()?;
        let f = s.signal()?;
        let Some((k, phi)) = f.plane_wave() else {
            bail!("signal is not a plane wave");
        };
        Ok(PlaneWave::new(f.omega, k.to_vec(), phi)?)
    }

    pub fn noise_plane_waves(&self) -> anyhow::Result<Vec<PlaneWave>> {
        let s = self.scenario()?;
        s.noise()
            .map(|f| match f.plane_wave() {
                Some((k, phi)) => Ok(PlaneWave::new(f.omega, k.to_vec(), phi)?),
                None => bail!("noise wave is not a plane wave"),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg: ScenarioConfig = serde_json::from_str(
            r#"{"sensors": [[0,0],[1,0]], "waves": [
                {"role":"noise","k":[0.0,0.0],"phi":"unknown"},
                {"role":"signal","direction":0.5}]}"#,
        )
        .unwrap();
        cfg.validate().unwrap();
        assert!(cfg.any_unknown_phase());
        let s = cfg.scenario().unwrap();
        assert_eq!(s.n(), 2);
        assert!(!s.waves[0].field.phase_known);
        assert_eq!(cfg.hash(), cfg.clone().hash());
    }

    #[test]
    fn rejects_bad_waves() {
        let cfg: ScenarioConfig =
            serde_json::from_str(r#"{"waves": [{"role":"noise","k":[1,0],"direction":1.0}]}"#).unwrap();
        assert!(cfg.validate().is_err());
        let cfg: ScenarioConfig = serde_json::from_str(r#"{"waves": [{"role":"noise","k":[1,0],"phi":"maybe"}]}"#).unwrap();
        assert!(cfg.validate().is_err());
        assert!(serde_json::from_str::<ScenarioConfig>(r#"{"omeg": 1}"#).is_err());
    }
}
