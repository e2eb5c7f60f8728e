//! Derivative-free maximization: Nelder–Mead with seeded random restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_evals: usize,
    pub initial_step: f64,
    /// Stop when the simplex value spread falls below this (absolute).
    pub ftol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            initial_step: 0.5,
            ftol: 1e-13,
        }
    }
}

impl NelderMead {
    /// Minimizes `f` from `x0`; returns the best point, its value and the evaluation count.
    /// The simplex is rebuilt around the incumbent whenever it collapses early.
    pub fn minimize<F: Fn(&[f64]) -> f64>(&self, f: &F, x0: &[f64]) -> (Vec<f64>, f64, usize) {
        let dim = x0.len();
        let mut evals = 0;
        let eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let mut best_x = x0.to_vec();
        let mut best_f = eval(x0, &mut evals);
        let mut step = self.initial_step;
        while evals < self.max_evals {
            let mut simplex: Vec<(Vec<f64>, f64)> = vec![(best_x.clone(), best_f)];
            for k in 0..dim {
                let mut x = best_x.clone();
                x[k] += step;
                let v = eval(&x, &mut evals);
                simplex.push((x, v));
            }
            loop {
                simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
                let spread = simplex[dim].1 - simplex[0].1;
                if evals >= self.max_evals || spread.abs() <= self.ftol * (1.0 + simplex[0].1.abs()) {
                    break;
                }
                let centroid: Vec<f64> = (0..dim)
                    .map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64)
                    .collect();
                let along = |t: f64| -> Vec<f64> {
                    centroid
                        .iter()
                        .zip(&simplex[dim].0)
                        .map(|(c, w)| c + t * (w - c))
                        .collect()
                };
                let xr = along(-1.0);
                let fr = eval(&xr, &mut evals);
                if fr < simplex[0].1 {
                    let xe = along(-2.0);
                    let fe = eval(&xe, &mut evals);
                    simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
                } else if fr < simplex[dim - 1].1 {
                    simplex[dim] = (xr, fr);
                } else {
                    let (xc, fc) = if fr < simplex[dim].1 {
                        let x = along(-0.5);
                        let v = eval(&x, &mut evals);
                        (x, v)
                    } else {
                        let x = along(0.5);
                        let v = eval(&x, &mut evals);
                        (x, v)
                    };
                    if fc < simplex[dim].1.min(fr) {
                        simplex[dim] = (xc, fc);
                    } else {
                        let x0 = simplex[0].0.clone();
                        for s in simplex.iter_mut().skip(1) {
                            let x: Vec<f64> = x0.iter().zip(&s.0).map(|(a, b)| a + 0.5 * (b - a)).collect();
                            let v = eval(&x, &mut evals);
                            *s = (x, v);
                        }
                    }
                }
            }
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let improved = simplex[0].1 < best_f - self.ftol * (1.0 + best_f.abs());
            if simplex[0].1 <= best_f {
                best_x = simplex[0].0.clone();
                best_f = simplex[0].1;
            }
            if !improved {
                step *= 0.25;
                if step < 1e-9 {
                    break;
                }
            }
        }
        (best_x, best_f, evals)
    }
}

/// Best of `restarts` Nelder–Mead runs maximizing `f`. Restart `r` starts from
/// `starts[r]` if given, otherwise from a point drawn uniformly from `bounds`
/// with a generator seeded by `(seed, r)`; so adding restarts never lowers the result.
pub fn multistart_maximize<F>(
    f: &F,
    bounds: &[(f64, f64)],
    starts: &[Vec<f64>],
    restarts: usize,
    opts: NelderMead,
    seed: u64,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let neg = |x: &[f64]| -f(x);
    let runs: Vec<(Vec<f64>, f64)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let x0 = starts.get(r).cloned().unwrap_or_else(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r as u64);
                bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect()
            });
            let (x, v, _) = opts.minimize(&neg, &x0);
            (x, -v)
        })
        .collect();
    runs.into_iter()
        .fold((Vec::new(), f64::NEG_INFINITY), |best, run| if run.1 > best.1 { run } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let nm = NelderMead {
            max_evals: 5000,
            ..Default::default()
        };
        let (x, v, _) = nm.minimize(&f, &[-1.2, 1.0]);
        assert!(v < 1e-10, "{v}");
        assert!((x[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn multistart_is_monotone_in_restarts() {
        let f = |x: &[f64]| (3.0 * x[0]).sin() * (2.0 * x[1]).cos() + 0.1 * x[0];
        let b = [(-3.0, 3.0), (-3.0, 3.0)];
        let opts = NelderMead {
            max_evals: 60,
            ..Default::default()
        };
        let mut last = f64::NEG_INFINITY;
        for r in [1, 2, 4, 8] {
            let (_, v) = multistart_maximize(&f, &b, &[], r, opts, 9);
            assert!(v >= last);
            last = v;
        }
    }
}
