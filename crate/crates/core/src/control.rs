//! Control sequences and the couplings `g_z` they induce.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::wavefield::{
    dot, is_whole_periods, phasor_at, MonochromaticField, PlaneWave, Profile, Row, SensorArray,
    SignString,
};
use crate::{Error, Result};

/// `sin(x)/x`, with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `∫_a^b e^{−iqt} dt`.
pub fn window_integral(q: f64, a: f64, b: f64) -> Complex64 {
    Complex64::from_polar((b - a) * sinc(q * (b - a) / 2.0), -q * (a + b) / 2.0)
}

/// Rectangular wave: `+1` on `(−γ, γ) + 2πZ`, `−1` elsewhere.
pub fn rect_wave(gamma: f64, t: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&gamma) {
        return Err(Error::OutOfRange {
            what: "gamma",
            value: gamma,
        });
    }
    Ok(rect_unchecked(gamma, t))
}

fn rect_unchecked(gamma: f64, t: f64) -> f64 {
    let r = (t + PI).rem_euclid(2.0 * PI) - PI;
    if r.abs() < gamma {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControlShape {
    /// `A cos(ωt + ϕ)`.
    Sinusoid { amplitude: f64, phase: f64, omega: f64 },
    /// `Π_γ(ωt + ϕ)`.
    Rect { gamma: f64, phase: f64, omega: f64 },
    Constant { value: f64 },
    /// Values on a uniform grid over `[−T/2, T/2]`, endpoints included.
    Sampled { values: Vec<f64> },
}

impl ControlShape {
    fn omega(&self) -> Option<f64> {
        match self {
            ControlShape::Sinusoid { omega, .. } | ControlShape::Rect { omega, .. } => Some(*omega),
            _ => None,
        }
    }

    pub fn value_at(&self, t: f64, duration: f64) -> f64 {
        match self {
            ControlShape::Sinusoid {
                amplitude,
                phase,
                omega,
            } => amplitude * (omega * t + phase).cos(),
            ControlShape::Rect {
                gamma,
                phase,
                omega,
            } => rect_unchecked(*gamma, omega * t + phase),
            ControlShape::Constant { value } => *value,
            ControlShape::Sampled { values } => {
                let h = duration / (values.len() - 1) as f64;
                let u = ((t + duration / 2.0) / h).clamp(0.0, (values.len() - 1) as f64);
                let k = (u.floor() as usize).min(values.len() - 2);
                let w = u - k as f64;
                values[k] * (1.0 - w) + values[k + 1] * w
            }
        }
    }

    /// Times in `(−T/2, T/2)` where a rectangular wave changes sign.
    pub fn flip_times(&self, duration: f64) -> Vec<f64> {
        let ControlShape::Rect {
            gamma,
            phase,
            omega,
        } = self
        else {
            return Vec::new();
        };
        let (lo, hi) = (-duration / 2.0, duration / 2.0);
        let mut out = Vec::new();
        for edge in [-gamma, *gamma] {
            // ωt + ϕ = edge + 2πm
            let m_lo = ((omega * lo + phase - edge) / (2.0 * PI)).floor() as i64;
            let m_hi = ((omega * hi + phase - edge) / (2.0 * PI)).ceil() as i64;
            for m in m_lo..=m_hi {
                let t = (edge + 2.0 * PI * m as f64 - phase) / omega;
                if t > lo && t < hi {
                    out.push(t);
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * duration);
        out
    }

    /// `∫_{−T/2}^{T/2} e^{−i q t} C(t) dt`.
    pub fn fourier_transform(&self, duration: f64, q: f64) -> Complex64 {
        let (lo, hi) = (-duration / 2.0, duration / 2.0);
        match self {
            ControlShape::Constant { value } => window_integral(q, lo, hi) * value,
            ControlShape::Sinusoid {
                amplitude,
                phase,
                omega,
            } => {
                let plus = Complex64::from_polar(1.0, *phase) * window_integral(q - omega, lo, hi);
                let minus = Complex64::from_polar(1.0, -phase) * window_integral(q + omega, lo, hi);
                (plus + minus) * (amplitude / 2.0)
            }
            ControlShape::Rect { .. } => {
                let mut edges = vec![lo];
                edges.extend(self.flip_times(duration));
                edges.push(hi);
                edges
                    .windows(2)
                    .map(|w| window_integral(q, w[0], w[1]) * self.value_at(0.5 * (w[0] + w[1]), duration))
                    .sum()
            }
            ControlShape::Sampled { values } => {
                let n = values.len();
                let h = duration / (n - 1) as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, v) in values.iter().enumerate() {
                    let t = lo + k as f64 * h;
                    let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                    acc += Complex64::from_polar(w * v, -q * t);
                }
                acc * h
            }
        }
    }
}

pub fn fourier_transform(shape: &ControlShape, duration: f64, omega_query: f64) -> Complex64 {
    shape.fourier_transform(duration, omega_query)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSequence {
    per_sensor: Vec<ControlShape>,
    duration: f64,
}

impl ControlSequence {
    pub fn new(per_sensor: Vec<ControlShape>, duration: f64) -> Result<Self> {
        if !(duration > 0.0) {
            return Err(Error::OutOfRange {
                what: "duration",
                value: duration,
            });
        }
        let mut omega = None;
        for shape in &per_sensor {
            match shape {
                ControlShape::Sinusoid {
                    amplitude, omega: w, ..
                } => {
                    if !(0.0..=1.0 + 1e-12).contains(amplitude) {
                        return Err(Error::OutOfRange {
                            what: "amplitude",
                            value: *amplitude,
                        });
                    }
                    check_omega(*w)?;
                }
                ControlShape::Rect { gamma, omega: w, .. } => {
                    if !(0.0..=PI / 2.0 + 1e-12).contains(gamma) {
                        return Err(Error::OutOfRange {
                            what: "gamma",
                            value: *gamma,
                        });
                    }
                    check_omega(*w)?;
                }
                ControlShape::Constant { value } => {
                    if ![-1.0, 0.0, 1.0].contains(value) {
                        return Err(Error::OutOfRange {
                            what: "constant control",
                            value: *value,
                        });
                    }
                }
                ControlShape::Sampled { values } => {
                    if values.len() < 2 {
                        return Err(Error::Precondition("sampled control needs at least 2 samples".into()));
                    }
                    if let Some(v) = values.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
                        return Err(Error::OutOfRange {
                            what: "sampled control",
                            value: *v,
                        });
                    }
                }
            }
            if let Some(w) = shape.omega() {
                match omega {
                    None => omega = Some(w),
                    Some(w0) if (w0 - w).abs() > 1e-12 * w0 => {
                        return Err(Error::Precondition("control shapes must share omega".into()))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self {
            per_sensor,
            duration,
        })
    }

    /// The same constant on every sensor.
    pub fn constant(value: f64, n: usize, duration: f64) -> Result<Self> {
        Self::new(vec![ControlShape::Constant { value }; n], duration)
    }

    pub fn shapes(&self) -> &[ControlShape] {
        &self.per_sensor
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn n(&self) -> usize {
        self.per_sensor.len()
    }

    pub fn value_at(&self, i: usize, t: f64) -> f64 {
        self.per_sensor[i].value_at(t, self.duration)
    }

    /// Flip times of all rectangular shapes, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .per_sensor
            .iter()
            .flat_map(|s| s.flip_times(self.duration))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Concatenation of two sequences over the same duration, e.g. two sensor groups.
    pub fn concat(&self, other: &ControlSequence) -> Result<Self> {
        if (self.duration - other.duration).abs() > 1e-12 * self.duration {
            return Err(Error::Precondition("durations differ".into()));
        }
        let mut shapes = self.per_sensor.clone();
        shapes.extend(other.per_sensor.iter().cloned());
        Self::new(shapes, self.duration)
    }

    /// Per-sensor Fourier transforms at `q`.
    pub fn transforms(&self, q: f64) -> Vec<Complex64> {
        self.per_sensor
            .iter()
            .map(|s| s.fourier_transform(self.duration, q))
            .collect()
    }
}

fn check_omega(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "omega",
            value: w,
        })
    }
}

/// `g_z = Σ_i z_i ∫ f(x_i, t) C_i(t) dt` for a monochromatic probe.
pub fn coupling_strength(
    z: &SignString,
    control: &ControlSequence,
    sensors: &SensorArray,
    probe: &MonochromaticField,
) -> Result<f64> {
    let n = sensors.len();
    if control.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: control.n(),
        });
    }
    if z.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: z.len(),
        });
    }
    let phasors: Vec<Complex64> = sensors.positions().iter().map(|x| phasor_at(probe, x)).collect();
    Ok(coupling_from_phasors(z, control, &phasors, probe.omega))
}

/// `Σ_i z_i Re(c_i 𝔉(C_i)(ω))`; exact for phasor local signals.
pub fn coupling_from_phasors(
    z: &SignString,
    control: &ControlSequence,
    phasors: &[Complex64],
    omega: f64,
) -> f64 {
    phasors
        .iter()
        .zip(control.shapes())
        .zip(z.iter())
        .map(|((c, shape), zi)| zi * (c * shape.fourier_transform(control.duration(), omega)).re)
        .sum()
}

/// Coupling of `control` to one field-matrix row.
pub fn coupling_to_row(
    z: &SignString,
    control: &ControlSequence,
    row: &Row,
    omega: Option<f64>,
) -> Result<f64> {
    if row.n() != control.n() {
        return Err(Error::LengthMismatch {
            expected: control.n(),
            got: row.n(),
        });
    }
    match row {
        Row::Phasor(c) => {
            let w = omega.ok_or(Error::IncompatibleRows("phasor row without omega"))?;
            Ok(coupling_from_phasors(z, control, c, w))
        }
        Row::Sampled(series) => {
            let t = control.duration();
            let g = series
                .iter()
                .enumerate()
                .zip(z.iter())
                .map(|((i, s), zi)| {
                    let grid = crate::wavefield::uniform_grid(t, s.len());
                    let f: Vec<f64> = grid
                        .iter()
                        .zip(s)
                        .map(|(&tk, v)| v * control.value_at(i, tk))
                        .collect();
                    zi * trapezoid(&f, t)
                })
                .sum();
            Ok(g)
        }
    }
}

pub(crate) fn trapezoid(values: &[f64], duration: f64) -> f64 {
    let n = values.len();
    let h = duration / (n - 1) as f64;
    h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
}

/// `⟨x, y⟩ = Σ_i z_i ∫ x_i(t) y_i(t) dt` over `[−T/2, T/2]`.
pub fn scalar_product(
    x: &Row,
    y: &Row,
    z: &SignString,
    duration: f64,
    omega: Option<f64>,
) -> Result<f64> {
    let n = x.n();
    if y.n() != n || z.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: if y.n() != n { y.n() } else { z.len() },
        });
    }
    match (x, y) {
        (Row::Phasor(cx), Row::Phasor(cy)) => {
            let w = omega.ok_or(Error::IncompatibleRows("phasor rows need omega"))?;
            if !is_whole_periods(duration, w) {
                return Err(Error::NonIntegerPeriods { duration, omega: w });
            }
            Ok(phasor_product(cx, cy, z, duration))
        }
        (Row::Sampled(sx), Row::Sampled(sy)) => {
            if sx[0].len() != sy[0].len() {
                return Err(Error::IncompatibleRows("sampled rows on different grids"));
            }
            Ok(sampled_product(sx, sy, z, duration))
        }
        (Row::Phasor(_), Row::Sampled(s)) | (Row::Sampled(s), Row::Phasor(_)) => {
            let w = omega.ok_or(Error::IncompatibleRows("phasor row needs omega to resample"))?;
            let points = s[0].len();
            let xs = x.to_sampled(w, duration, points);
            let ys = y.to_sampled(w, duration, points);
            scalar_product(&xs, &ys, z, duration, omega)
        }
    }
}

pub(crate) fn phasor_product(cx: &[Complex64], cy: &[Complex64], z: &SignString, duration: f64) -> f64 {
    0.5 * duration
        * cx.iter()
            .zip(cy)
            .zip(z.iter())
            .map(|((a, b), zi)| zi * (a * b.conj()).re)
            .sum::<f64>()
}

pub(crate) fn sampled_product(sx: &[Vec<f64>], sy: &[Vec<f64>], z: &SignString, duration: f64) -> f64 {
    sx.iter()
        .zip(sy)
        .zip(z.iter())
        .map(|((a, b), zi)| {
            let prod: Vec<f64> = a.iter().zip(b).map(|(u, v)| u * v).collect();
            zi * trapezoid(&prod, duration)
        })
        .sum()
}

fn whole_periods(omega: f64, duration: f64) -> Result<()> {
    check_omega(omega)?;
    if is_whole_periods(duration, omega) {
        Ok(())
    } else {
        Err(Error::NonIntegerPeriods { duration, omega })
    }
}

/// Lock-in control `Π_{π/2}(ωt − π/2)` on every sensor.
pub fn lockin_sequence(omega: f64, duration: f64, n: usize) -> Result<ControlSequence> {
    whole_periods(omega, duration)?;
    ControlSequence::new(
        vec![
            ControlShape::Rect {
                gamma: PI / 2.0,
                phase: 1.5 * PI,
                omega,
            };
            n
        ],
        duration,
    )
}

/// Per-sensor lock-in that rectifies the local signal of `signal` at every sensor.
pub fn wave_lock_sequence(
    signal: &PlaneWave,
    sensors: &SensorArray,
    duration: f64,
) -> Result<ControlSequence> {
    whole_periods(signal.omega, duration)?;
    let shapes = sensors
        .positions()
        .iter()
        .map(|x| ControlShape::Rect {
            gamma: PI / 2.0,
            phase: (-dot(&signal.kvec, x) - signal.phi).rem_euclid(2.0 * PI),
            omega: signal.omega,
        })
        .collect();
    ControlSequence::new(shapes, duration)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeFamily {
    /// Plane waves of wave number `k_mag` with direction angle as the parameter.
    Direction { omega: f64, k_mag: f64, phi: f64 },
    /// Plane waves of fixed wave vector with angular frequency as the parameter.
    Frequency { kvec: Vec<f64>, phi: f64 },
}

impl ProbeFamily {
    pub fn probe(&self, p: f64) -> MonochromaticField {
        let (omega, kvec, phi) = match self {
            ProbeFamily::Direction { omega, k_mag, phi } => {
                (*omega, vec![k_mag * p.cos(), k_mag * p.sin()], *phi)
            }
            ProbeFamily::Frequency { kvec, phi } => (p, kvec.clone(), *phi),
        };
        MonochromaticField {
            omega,
            profile: Profile::Plane { kvec, phi },
            phase_known: true,
        }
    }
}

/// `(parameter, g²)` at every grid point.
pub fn coupling_spectrum(
    z: &SignString,
    control: &ControlSequence,
    sensors: &SensorArray,
    family: &ProbeFamily,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if grid.is_empty() {
        return Err(Error::Precondition("empty probe grid".into()));
    }
    grid.par_iter()
        .map(|&p| coupling_strength(z, control, sensors, &family.probe(p)).map(|g| (p, g * g)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn plane(omega: f64, k: [f64; 2], phi: f64) -> MonochromaticField {
        PlaneWave::new(omega, k.to_vec(), phi).unwrap().into()
    }

    #[test]
    fn rect_wave_examples() {
        assert_eq!(rect_wave(PI / 2.0, 0.0).unwrap(), 1.0);
        assert_eq!(rect_wave(PI / 2.0, PI).unwrap(), -1.0);
        assert_eq!(rect_wave(PI / 4.0, PI / 3.0).unwrap(), -1.0);
        assert_eq!(rect_wave(PI / 4.0, 2.0 * PI + 0.1).unwrap(), 1.0);
        assert!(rect_wave(4.0, 0.0).is_err());
    }

    #[test]
    fn fourier_transform_examples() {
        let t = 5.0;
        let c = ControlShape::Constant { value: 1.0 };
        assert_relative_eq!(c.fourier_transform(t, 0.0).re, t);
        let f = c.fourier_transform(t, 1.3);
        assert_relative_eq!(f.re, t * sinc(1.3 * t / 2.0), epsilon = 1e-14);
        assert!(f.im.abs() < 1e-14);

        let s = ControlShape::Sinusoid {
            amplitude: 1.0,
            phase: 0.0,
            omega: 1.0,
        };
        let f = s.fourier_transform(6.0 * PI, 1.0);
        assert_relative_eq!(f.re, 3.0 * PI, epsilon = 1e-12);
        assert!(f.im.abs() < 1e-12);
    }

    #[test]
    fn resonant_single_sensor_coupling() {
        let sensors = SensorArray::new(vec![vec![0.0, 0.0]]).unwrap();
        let c = ControlSequence::new(
            vec![ControlShape::Sinusoid {
                amplitude: 1.0,
                phase: 0.0,
                omega: 1.0,
            }],
            2.0 * PI,
        )
        .unwrap();
        let g = coupling_strength(&SignString::all_ones(1), &c, &sensors, &plane(1.0, [0.3, 0.0], 0.0)).unwrap();
        assert_relative_eq!(g, PI, epsilon = 1e-12);
    }

    #[test]
    fn lockin_harmonics() {
        let sensors = SensorArray::new(vec![vec![0.0, 0.0]]).unwrap();
        let z = SignString::all_ones(1);
        let c = lockin_sequence(1.0, 6.0 * PI, 1).unwrap();
        let flips = c.breakpoints();
        assert_eq!(flips.len(), 5);
        for (m, t) in (-2..=2).zip(&flips) {
            assert_relative_eq!(*t, m as f64 * PI, epsilon = 1e-12);
        }
        let g1 = coupling_strength(&z, &c, &sensors, &plane(1.0, [0.0, 0.0], PI / 2.0)).unwrap();
        assert_relative_eq!(g1.abs(), 12.0, epsilon = 1e-12);
        let g2 = coupling_strength(&z, &c, &sensors, &plane(2.0, [0.0, 0.0], 0.4)).unwrap();
        assert!(g2.abs() < 1e-12);
        let g3 = coupling_strength(&z, &c, &sensors, &plane(3.0, [0.0, 0.0], PI / 2.0)).unwrap();
        assert_relative_eq!(g3.abs(), 4.0, epsilon = 1e-12);
        assert!(lockin_sequence(1.0, 5.0, 1).is_err());
    }

    #[test]
    fn wave_lock_examples() {
        let origin = SensorArray::new(vec![vec![0.0, 0.0]]).unwrap();
        let w = PlaneWave::new(1.0, vec![1.0, 0.5], PI / 2.0).unwrap();
        let a = wave_lock_sequence(&w, &origin, 2.0 * PI).unwrap();
        let b = lockin_sequence(1.0, 2.0 * PI, 1).unwrap();
        let (ControlShape::Rect { phase: pa, .. }, ControlShape::Rect { phase: pb, .. }) = (&a.shapes()[0], &b.shapes()[0]) else {
            panic!()
        };
        assert_relative_eq!(*pa, *pb, epsilon = 1e-12);

        let pair = SensorArray::new(vec![vec![0.0, 0.0], vec![PI, 0.0]]).unwrap();
        let w = PlaneWave::new(1.0, vec![1.0, 0.0], 0.0).unwrap();
        let c = wave_lock_sequence(&w, &pair, 2.0 * PI).unwrap();
        let ph: Vec<f64> = c
            .shapes()
            .iter()
            .map(|s| match s {
                ControlShape::Rect { phase, .. } => *phase,
                _ => unreachable!(),
            })
            .collect();
        assert_relative_eq!((ph[0] - ph[1]).rem_euclid(2.0 * PI), PI, epsilon = 1e-12);

        let probe: MonochromaticField = w.clone().into();
        for n in 1..6 {
            let sensors = SensorArray::new((0..n).map(|i| vec![0.37 * i as f64, -0.2 * i as f64]).collect()).unwrap();
            let c = wave_lock_sequence(&w, &sensors, 4.0 * PI).unwrap();
            let g = coupling_strength(&SignString::all_ones(n), &c, &sensors, &probe).unwrap();
            assert_relative_eq!(g, n as f64 * 8.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn scalar_product_examples() {
        let t = 4.0 * PI;
        let theta = [0.1, 1.2, -2.0];
        let x = Row::Phasor(theta.iter().map(|&a| Complex64::from_polar(1.0, a)).collect());
        let z = SignString::all_ones(3);
        assert_relative_eq!(scalar_product(&x, &x, &z, t, Some(1.0)).unwrap(), 3.0 * PI * 2.0, epsilon = 1e-12);

        let a = Row::Phasor(vec![Complex64::new(1.0, 0.0)]);
        let b = Row::Phasor(vec![Complex64::new(0.0, 1.0)]);
        let z1 = SignString::all_ones(1);
        assert!(scalar_product(&a, &b, &z1, t, Some(1.0)).unwrap().abs() < 1e-15);
        assert!(matches!(
            scalar_product(&a, &b, &z1, 1.0, Some(1.0)),
            Err(Error::NonIntegerPeriods { .. })
        ));

        let xs = x.to_sampled(1.0, t, 401);
        let fast = scalar_product(&x, &x, &z, t, Some(1.0)).unwrap();
        let slow = scalar_product(&xs, &xs, &z, t, Some(1.0)).unwrap();
        assert_relative_eq!(fast, slow, max_relative = 1e-10);
        let mixed = scalar_product(&x, &xs, &z, t, Some(1.0)).unwrap();
        assert_relative_eq!(fast, mixed, max_relative = 1e-10);
    }

    #[test]
    fn zero_control_spectrum_vanishes() {
        let sensors = SensorArray::circle(4, 1.0, 0.0).unwrap();
        let c = ControlSequence::constant(0.0, 4, 2.0 * PI).unwrap();
        let fam = ProbeFamily::Direction {
            omega: 1.0,
            k_mag: 1.0,
            phi: 0.0,
        };
        let grid: Vec<f64> = (0..32).map(|i| i as f64 * 0.2).collect();
        let spec = coupling_spectrum(&SignString::all_ones(4), &c, &sensors, &fam, &grid).unwrap();
        assert!(spec.iter().all(|(_, g2)| *g2 == 0.0));
        assert!(coupling_spectrum(&SignString::all_ones(4), &c, &sensors, &fam, &[]).is_err());
    }

    #[test]
    fn control_validation() {
        let bad_amp = ControlShape::Sinusoid {
            amplitude: 1.5,
            phase: 0.0,
            omega: 1.0,
        };
        assert!(ControlSequence::new(vec![bad_amp], 1.0).is_err());
        let mixed = vec![
            ControlShape::Sinusoid {
                amplitude: 0.5,
                phase: 0.0,
                omega: 1.0,
            },
            ControlShape::Rect {
                gamma: 0.5,
                phase: 0.0,
                omega: 2.0,
            },
        ];
        assert!(ControlSequence::new(mixed, 1.0).is_err());
        assert!(ControlSequence::constant(0.5, 2, 1.0).is_err());
    }
}
