//! Waves, sensors and the field matrices assembled from them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance used to decide that a duration is a whole number of periods.
pub const PERIOD_TOL: f64 = 1e-9;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A unit-amplitude plane wave `cos(k·x − ωt + φ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub omega: f64,
    pub kvec: Vec<f64>,
    pub phi: f64,
    pub phase_known: bool,
}

impl PlaneWave {
    pub fn new(omega: f64, kvec: Vec<f64>, phi: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::OutOfRange {
                what: "omega",
                value: omega,
            });
        }
        if !(2..=3).contains(&kvec.len()) {
            return Err(Error::LengthMismatch {
                expected: 2,
                got: kvec.len(),
            });
        }
        Ok(Self {
            omega,
            kvec,
            phi: phi.rem_euclid(2.0 * PI),
            phase_known: true,
        })
    }

    /// Same wave, flagged as having an unknown (uniformly distributed) phase.
    pub fn with_unknown_phase(mut self) -> Self {
        self.phase_known = false;
        self
    }

    /// 2D wave of wave number `k_mag` travelling along direction angle `alpha`.
    pub fn from_direction(omega: f64, k_mag: f64, alpha: f64, phi: f64) -> Result<Self> {
        Self::new(omega, vec![k_mag * alpha.cos(), k_mag * alpha.sin()], phi)
    }

    pub fn k_norm(&self) -> f64 {
        dot(&self.kvec, &self.kvec).sqrt()
    }

    pub fn spatial_phase(&self, x: &[f64]) -> f64 {
        dot(&self.kvec, x)
    }
}

/// Spatial complex amplitude `f(x)` of a monochromatic field.
#[derive(Clone)]
pub enum Profile {
    /// `e^{i(k·x + φ)}`.
    Plane { kvec: Vec<f64>, phi: f64 },
    /// Values given at a fixed set of points; looked up by position.
    Tabulated(Vec<(Vec<f64>, Complex64)>),
    Custom(Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Plane { kvec, phi } => f
                .debug_struct("Plane")
                .field("kvec", kvec)
                .field("phi", phi)
                .finish(),
            Profile::Tabulated(points) => write!(f, "Tabulated({} points)", points.len()),
            Profile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Profile {
    pub fn at(&self, x: &[f64]) -> Complex64 {
        match self {
            Profile::Plane { kvec, phi } => Complex64::from_polar(1.0, dot(kvec, x) + phi),
            Profile::Tabulated(points) => points
                .iter()
                .find(|(p, _)| {
                    p.len() == x.len() && p.iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-12)
                })
                .map(|(_, v)| *v)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
            Profile::Custom(f) => f(x),
        }
    }
}

/// A field `Re(profile(x) e^{−iωt})`.
#[derive(Debug, Clone)]
pub struct MonochromaticField {
    pub omega: f64,
    pub profile: Profile,
    pub phase_known: bool,
}

impl MonochromaticField {
    pub fn plane_wave(&self) -> Option<(&[f64], f64)> {
        match &self.profile {
            Profile::Plane { kvec, phi } => Some((kvec, *phi)),
            _ => None,
        }
    }
}

impl From<&PlaneWave> for MonochromaticField {
    fn from(w: &PlaneWave) -> Self {
        Self {
            omega: w.omega,
            profile: Profile::Plane {
                kvec: w.kvec.clone(),
                phi: w.phi,
            },
            phase_known: w.phase_known,
        }
    }
}

impl From<PlaneWave> for MonochromaticField {
    fn from(w: PlaneWave) -> Self {
        (&w).into()
    }
}

pub fn eval_field(field: &MonochromaticField, x: &[f64], t: f64) -> f64 {
    (phasor_at(field, x) * Complex64::from_polar(1.0, -field.omega * t)).re
}

/// Complex phasor `c` with `eval_field(field, x, t) = Re(c e^{−iωt})`.
pub fn phasor_at(field: &MonochromaticField, x: &[f64]) -> Complex64 {
    field.profile.at(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorArray {
    positions: Vec<Vec<f64>>,
}

impl SensorArray {
    pub fn new(positions: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = positions.first() else {
            return Err(Error::Precondition("sensor array must not be empty".into()));
        };
        let dim = first.len();
        if let Some(bad) = positions.iter().find(|p| p.len() != dim) {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(Self { positions })
    }

    /// `n` sensors equally spaced on a circle, the first at angle `offset`.
    pub fn circle(n: usize, radius: f64, offset: f64) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| {
                    let a = offset + 2.0 * PI * i as f64 / n as f64;
                    vec![radius * a.cos(), radius * a.sin()]
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec<f64>] {
        &self.positions
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i]
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.positions[i].clone()).collect())
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.positions.iter().enumerate() {
            for b in &self.positions[i + 1..] {
                let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
                d = d.max(s.sqrt());
            }
        }
        d
    }
}

/// Computational-basis label `z ∈ {−1, +1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignString(Vec<i8>);

impl TryFrom<Vec<i8>> for SignString {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignString::new(v)
    }
}

impl From<SignString> for Vec<i8> {
    fn from(z: SignString) -> Self {
        z.0
    }
}

impl SignString {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::OutOfRange {
                what: "sign string entry",
                value: bad as f64,
            });
        }
        Ok(Self(entries))
    }

    pub fn all_ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Bit `i` of `mask` set means `z_i = −1`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Self((0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn mask(&self) -> u64 {
        assert!(self.0.len() <= 64, "mask representation needs n <= 64");
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &z)| z < 0)
            .fold(0u64, |m, (i, _)| m | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i] as f64
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|&z| z as f64)
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|z| -z).collect())
    }
}

impl std::ops::Neg for &SignString {
    type Output = SignString;
    fn neg(self) -> SignString {
        self.negated()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Noise,
    Signal,
}

#[derive(Debug, Clone)]
pub struct Wave {
    pub role: Role,
    pub field: MonochromaticField,
}

impl Wave {
    pub fn noise(field: impl Into<MonochromaticField>) -> Self {
        Self {
            role: Role::Noise,
            field: field.into(),
        }
    }

    pub fn signal(field: impl Into<MonochromaticField>) -> Self {
        Self {
            role: Role::Signal,
            field: field.into(),
        }
    }
}

/// Sensors plus waves sharing one angular frequency, observed over whole periods.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub sensors: SensorArray,
    pub waves: Vec<Wave>,
    pub omega: f64,
    pub periods: u32,
}

impl Scenario {
    pub fn new(sensors: SensorArray, waves: Vec<Wave>, omega: f64, periods: u32) -> Result<Self> {
        if periods == 0 {
            return Err(Error::OutOfRange {
                what: "periods",
                value: 0.0,
            });
        }
        if !(omega > 0.0) {
            return Err(Error::OutOfRange {
                what: "omega",
                value: omega,
            });
        }
        Ok(Self {
            sensors,
            waves,
            omega,
            periods,
        })
    }

    pub fn duration(&self) -> f64 {
        2.0 * PI * self.periods as f64 / self.omega
    }

    pub fn n(&self) -> usize {
        self.sensors.len()
    }

    pub fn noise(&self) -> impl Iterator<Item = &MonochromaticField> {
        self.waves
            .iter()
            .filter(|w| w.role == Role::Noise)
            .map(|w| &w.field)
    }

    pub fn signal(&self) -> Result<&MonochromaticField> {
        let mut signals = self.waves.iter().filter(|w| w.role == Role::Signal);
        let first = signals.next().ok_or(Error::NoSignal)?;
        let extra = signals.count();
        if extra > 0 {
            return Err(Error::MultipleSignals(extra + 1));
        }
        Ok(&first.field)
    }

    /// Same waves restricted to a subset of sensors.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        Ok(Self {
            sensors: self.sensors.subset(indices)?,
            waves: self.waves.clone(),
            omega: self.omega,
            periods: self.periods,
        })
    }
}

/// One row of a field matrix: a local signal per sensor.
#[derive(Debug, Clone, PartialEq)]
pub enum Row {
    /// Local signal `Re(c_i e^{−iωt})` at the matrix's common ω.
    Phasor(Vec<Complex64>),
    /// Per-sensor samples on a uniform grid over `[−T/2, T/2]` (endpoints included).
    Sampled(Vec<Vec<f64>>),
}

impl Row {
    pub fn n(&self) -> usize {
        match self {
            Row::Phasor(c) => c.len(),
            Row::Sampled(s) => s.len(),
        }
    }

    pub fn grid_len(&self) -> Option<usize> {
        match self {
            Row::Phasor(_) => None,
            Row::Sampled(s) => s.first().map(Vec::len),
        }
    }

    /// Resample onto a uniform grid of `points` samples.
    pub fn to_sampled(&self, omega: f64, duration: f64, points: usize) -> Row {
        match self {
            Row::Sampled(_) => self.clone(),
            Row::Phasor(c) => {
                let grid = uniform_grid(duration, points);
                Row::Sampled(
                    c.iter()
                        .map(|ci| {
                            grid.iter()
                                .map(|&t| (ci * Complex64::from_polar(1.0, -omega * t)).re)
                                .collect()
                        })
                        .collect(),
                )
            }
        }
    }
}

pub(crate) fn uniform_grid(duration: f64, points: usize) -> Vec<f64> {
    let h = duration / (points - 1) as f64;
    (0..points).map(|k| -duration / 2.0 + k as f64 * h).collect()
}

pub(crate) fn is_whole_periods(duration: f64, omega: f64) -> bool {
    let periods = duration * omega / (2.0 * PI);
    periods.round() >= 1.0 && (periods - periods.round()).abs() <= PERIOD_TOL * periods.max(1.0)
}

/// Rows of local signals; the noise rows come first and the signal row is last.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMatrix {
    rows: Vec<Row>,
    roles: Vec<Role>,
    duration: f64,
    omega: Option<f64>,
}

impl FieldMatrix {
    pub fn new(rows: Vec<Row>, roles: Vec<Role>, duration: f64, omega: Option<f64>) -> Result<Self> {
        if rows.len() != roles.len() {
            return Err(Error::LengthMismatch {
                expected: rows.len(),
                got: roles.len(),
            });
        }
        let signals = roles.iter().filter(|r| **r == Role::Signal).count();
        match signals {
            0 => return Err(Error::NoSignal),
            1 if roles.last() == Some(&Role::Signal) => {}
            1 => return Err(Error::Precondition("signal row must be the last row".into())),
            k => return Err(Error::MultipleSignals(k)),
        }
        if !(duration > 0.0) {
            return Err(Error::OutOfRange {
                what: "duration",
                value: duration,
            });
        }
        let n = rows[0].n();
        if let Some(bad) = rows.iter().find(|r| r.n() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        let grid = rows.iter().find_map(Row::grid_len);
        for row in &rows {
            if let Row::Sampled(s) = row {
                if s.iter().any(|series| Some(series.len()) != grid) || grid < Some(2) {
                    return Err(Error::IncompatibleRows("sampled rows need one common grid"));
                }
            }
        }
        if rows.iter().any(|r| matches!(r, Row::Phasor(_))) {
            let Some(w) = omega else {
                return Err(Error::IncompatibleRows("phasor rows need a common omega"));
            };
            if !is_whole_periods(duration, w) {
                return Err(Error::NonIntegerPeriods { duration, omega: w });
            }
        }
        Ok(Self {
            rows,
            roles,
            duration,
            omega,
        })
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn omega(&self) -> Option<f64> {
        self.omega
    }

    pub fn n(&self) -> usize {
        self.rows[0].n()
    }

    pub fn noise_rows(&self) -> &[Row] {
        &self.rows[..self.rows.len() - 1]
    }

    pub fn signal_row(&self) -> &Row {
        self.rows.last().expect("validated non-empty")
    }

    /// Grid length shared by sampled rows, if any.
    pub fn grid_len(&self) -> Option<usize> {
        self.rows.iter().find_map(Row::grid_len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldMode {
    KnownPhases,
    /// Each noise wave contributes its cosine and sine components.
    UnknownPhases,
    /// Only the point-symmetric components, for an array symmetric under `z`.
    PointSymmetric(SignString),
}

pub fn build_field_matrix(
    waves: &[Wave],
    sensors: &SensorArray,
    duration: f64,
    mode: &FieldMode,
) -> Result<FieldMatrix> {
    let signals: Vec<&Wave> = waves.iter().filter(|w| w.role == Role::Signal).collect();
    let signal = match signals.len() {
        0 => return Err(Error::NoSignal),
        1 => signals[0],
        k => return Err(Error::MultipleSignals(k)),
    };
    let omega = signal.field.omega;
    let noise = waves.iter().filter(|w| w.role == Role::Noise);
    let local = |f: &MonochromaticField| -> Vec<Complex64> {
        sensors.positions().iter().map(|x| phasor_at(f, x)).collect()
    };

    let mut rows = Vec::new();
    match mode {
        FieldMode::KnownPhases => {
            rows.extend(noise.map(|w| Row::Phasor(local(&w.field))));
            rows.push(Row::Phasor(local(&signal.field)));
        }
        FieldMode::UnknownPhases => {
            let noise: Vec<Vec<Complex64>> = noise.map(|w| local(&w.field)).collect();
            let minus_i = Complex64::new(0.0, -1.0);
            rows.extend(noise.iter().map(|c| Row::Phasor(c.clone())));
            rows.extend(
                noise
                    .iter()
                    .map(|c| Row::Phasor(c.iter().map(|v| v * minus_i).collect())),
            );
            rows.push(Row::Phasor(local(&signal.field)));
        }
        FieldMode::PointSymmetric(z) => {
            let center = check_point_symmetry(sensors, z).ok_or(Error::NotPointSymmetric)?;
            let signal_phase = symmetric_reference_phase(&signal.field, &center);
            let rotate = Complex64::from_polar(1.0, signal_phase);
            for w in noise {
                rows.push(Row::Phasor(symmetric_component(&w.field, sensors, &center, rotate)));
            }
            rows.push(Row::Phasor(symmetric_component(
                &signal.field,
                sensors,
                &center,
                rotate,
            )));
        }
    }
    let roles = {
        let mut r = vec![Role::Noise; rows.len() - 1];
        r.push(Role::Signal);
        r
    };
    FieldMatrix::new(rows, roles, duration, Some(omega))
}

/// Phase `k·p + φ` that a plane wave carries at the symmetry center.
fn symmetric_reference_phase(field: &MonochromaticField, center: &[f64]) -> f64 {
    match field.plane_wave() {
        Some((k, phi)) => dot(k, center) + phi,
        None => 0.0,
    }
}

/// Point-symmetric part of a field about `center`. Plane waves are reduced to
/// the real standing wave `cos(k·(x − p))` and carried at the phase `rotate`,
/// which covers every noise phase once the control is real up to that phase.
fn symmetric_component(
    field: &MonochromaticField,
    sensors: &SensorArray,
    center: &[f64],
    rotate: Complex64,
) -> Vec<Complex64> {
    sensors
        .positions()
        .iter()
        .map(|x| match field.plane_wave() {
            Some((k, _)) => {
                let shifted: Vec<f64> = x.iter().zip(center).map(|(a, p)| a - p).collect();
                rotate * dot(k, &shifted).cos()
            }
            None => {
                let mirror: Vec<f64> = x.iter().zip(center).map(|(a, p)| 2.0 * p - a).collect();
                (phasor_at(field, x) + phasor_at(field, &mirror)) / 2.0
            }
        })
        .collect()
}

/// Center `p` such that every sensor has a mirror partner `2p − x_i` carrying
/// the same sign. Only the centroid is tested.
pub fn check_point_symmetry(sensors: &SensorArray, z: &SignString) -> Option<Vec<f64>> {
    let n = sensors.len();
    if z.len() != n {
        return None;
    }
    let dim = sensors.position(0).len();
    let center: Vec<f64> = (0..dim)
        .map(|d| sensors.positions().iter().map(|x| x[d]).sum::<f64>() / n as f64)
        .collect();
    let tol = (1e-9 * sensors.diameter()).max(1e-12);
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let target: Vec<f64> = sensors
            .position(i)
            .iter()
            .zip(&center)
            .map(|(x, p)| 2.0 * p - x)
            .collect();
        let partner = (i..n).find(|&j| {
            !used[j]
                && z.entries()[j] == z.entries()[i]
                && sensors
                    .position(j)
                    .iter()
                    .zip(&target)
                    .all(|(a, b)| (a - b).abs() <= tol)
        })?;
        used[i] = true;
        used[partner] = true;
    }
    Some(center)
}
