//! Romberg integration, used as an independent check of closed-form couplings
//! and for fields without a phasor form.

use crate::control::{ControlSequence, ControlShape};
use crate::wavefield::{SensorArray, SignString};
use crate::{Error, Result};

const MAX_LEVEL: usize = 22;

/// Romberg on `[a, b]` until successive diagonal entries agree to `rel_tol`.
pub fn romberg<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h0 = b - a;
    let mut prev = vec![0.5 * h0 * (f(a) + f(b))];
    for level in 1..MAX_LEVEL {
        let steps = 1usize << level;
        let h = h0 / steps as f64;
        let mid: f64 = (0..steps / 2).map(|j| f(a + (2 * j + 1) as f64 * h)).sum();
        let mut row = Vec::with_capacity(level + 1);
        row.push(0.5 * prev[0] + h * mid);
        let mut factor = 1.0;
        for k in 1..=level {
            factor *= 4.0;
            let r = row[k - 1] + (row[k - 1] - prev[k - 1]) / (factor - 1.0);
            row.push(r);
        }
        let (best, last) = (row[level], prev[level - 1]);
        if level >= 4 && (best - last).abs() <= rel_tol * best.abs().max(1e-300) + 1e-15 * h0 {
            return best;
        }
        prev = row;
    }
    prev[MAX_LEVEL - 1]
}

/// Integral over `[a, b]`, split at the given breakpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breakpoints: &[f64], rel_tol: f64) -> f64 {
    let mut edges = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&t| t > a && t < b).collect();
    inner.sort_by(f64::total_cmp);
    edges.extend(inner);
    edges.push(b);
    edges
        .windows(2)
        .map(|w| romberg(f, w[0], w[1], rel_tol))
        .sum()
}

/// `Σ_i z_i ∫ field(x_i, t) C_i(t) dt` by direct quadrature. `field_breaks`
/// are extra times where the field itself is not smooth.
pub fn coupling_quadrature<F>(
    z: &SignString,
    control: &ControlSequence,
    sensors: &SensorArray,
    field: F,
    field_breaks: &[f64],
) -> Result<f64>
where
    F: Fn(&[f64], f64) -> f64,
{
    let n = sensors.len();
    if control.n() != n || z.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: control.n().min(z.len()),
        });
    }
    let t = control.duration();
    let mut total = 0.0;
    for i in 0..n {
        let mut breaks = control.shapes()[i].flip_times(t);
        if let ControlShape::Sampled { values } = &control.shapes()[i] {
            let h = t / (values.len() - 1) as f64;
            breaks.extend((1..values.len() - 1).map(|k| -t / 2.0 + k as f64 * h));
        }
        breaks.extend_from_slice(field_breaks);
        breaks.retain(|&b| b > -t / 2.0 && b < t / 2.0);
        breaks.sort_by(f64::total_cmp);
        let mut edges = vec![-t / 2.0];
        edges.extend(breaks);
        edges.push(t / 2.0);
        let x = sensors.position(i);
        let shape = &control.shapes()[i];
        let mut g = 0.0;
        for w in edges.windows(2) {
            // Rect shapes are constant on a segment; sample the sign away from the flips.
            let sign = match shape {
                ControlShape::Rect { .. } => Some(shape.value_at(0.5 * (w[0] + w[1]), t)),
                _ => None,
            };
            let f = |s: f64| field(x, s) * sign.unwrap_or_else(|| shape.value_at(s, t));
            g += romberg(&f, w[0], w[1], 1e-13);
        }
        total += z.get(i) * g;
    }
    Ok(total)
}
