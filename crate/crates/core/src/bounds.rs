//! Bounds on what separable sensor states can extract from a DFS, with
//! randomized and exhaustive checks.
//!
//! Bitstrings use the mask convention of the rest of the crate: bit `i` set
//! means `z_i = −1`, i.e. bit value 1.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dfsbuild::{build_dfs_plan, enumerate_affine_dfs, DfsPartition};
use crate::wavefield::{phasor_at, FieldMode, Scenario, SignString};
use crate::{Error, Result};

pub fn hamming(a: &SignString, b: &SignString) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.entries().iter().zip(b.entries()).filter(|(x, y)| x != y).count())
}

pub fn hamming_mask(a: u64, b: u64) -> usize {
    (a ^ b).count_ones() as usize
}

/// Independent bits; `p[i]` is the probability that bit `i` is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductDistribution {
    pub p: Vec<f64>,
}

impl ProductDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange {
                what: "bit probability",
                value: bad,
            });
        }
        Ok(Self { p })
    }

    pub fn iid(p: f64, n: usize) -> Result<Self> {
        Self::new(vec![p; n])
    }

    /// Computational-basis statistics of a product state `⊗(a_i|0⟩ + b_i|1⟩)`.
    pub fn from_product_state(qubits: &[[Complex64; 2]]) -> Result<Self> {
        Self::new(
            qubits
                .iter()
                .map(|q| {
                    let n = q[0].norm_sqr() + q[1].norm_sqr();
                    q[0].norm_sqr() / n
                })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn prob(&self, mask: u64) -> f64 {
        self.p
            .iter()
            .enumerate()
            .map(|(i, &p)| if mask >> i & 1 == 1 { 1.0 - p } else { p })
            .product()
    }

    /// Probability that exactly `k` bits differ from `center`, for every `k`.
    pub fn distance_distribution(&self, center: u64) -> Vec<f64> {
        let mut dist = vec![1.0];
        for (i, &p) in self.p.iter().enumerate() {
            let differ = if center >> i & 1 == 1 { p } else { 1.0 - p };
            let mut next = vec![0.0; dist.len() + 1];
            for (k, &v) in dist.iter().enumerate() {
                next[k] += v * (1.0 - differ);
                next[k + 1] += v * differ;
            }
            dist = next;
        }
        dist
    }

    /// `Pr(B_r(center))`.
    pub fn ball_probability(&self, center: u64, r: usize) -> f64 {
        self.distance_distribution(center).iter().take(r + 1).sum()
    }

    /// `Pr(C_r(center))`: strings at distance exactly `r`.
    pub fn sphere_probability(&self, center: u64, r: usize) -> f64 {
        self.distance_distribution(center).get(r).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfsCertificate {
    pub class: Vec<u64>,
    pub m: usize,
    pub min_hamming: usize,
}

impl DfsCertificate {
    /// Checks that every pair in `class` is at least `m` apart.
    pub fn new(class: Vec<u64>, m: usize) -> Result<Self> {
        let min_hamming = min_pairwise_hamming(&class);
        if class.len() > 1 && min_hamming < m {
            return Err(Error::HammingPrecondition {
                found: min_hamming,
                required: m,
            });
        }
        Ok(Self { class, m, min_hamming })
    }
}

/// `usize::MAX` for classes with fewer than two members.
pub fn min_pairwise_hamming(class: &[u64]) -> usize {
    let mut best = usize::MAX;
    for (i, &a) in class.iter().enumerate() {
        for &b in &class[i + 1..] {
            best = best.min(hamming_mask(a, b));
        }
    }
    best
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// `Σ_{ℓ≤r} C(m, ℓ)`.
pub fn ball_volume(m: usize, r: usize) -> Result<BigUint> {
    if r > m {
        return Err(Error::OutOfRange {
            what: "ball radius",
            value: r as f64,
        });
    }
    Ok((0..=r).map(|l| binomial(m, l)).sum())
}

/// `1 / Σ_{ℓ≤⌊(m−1)/2⌋} C(m, ℓ)`: bound on the probability a product state
/// puts on all but the likeliest member of a class with pairwise distance ≥ m.
pub fn result2_bound(m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::OutOfRange {
            what: "m",
            value: 0.0,
        });
    }
    let v = ball_volume(m, (m - 1) / 2)?;
    Ok(BigRational::new(BigInt::one(), BigInt::from(v)))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The two weaker terms sometimes quoted after `result2_bound`, and whether
/// the three form a descending chain at this `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundChain {
    pub m: usize,
    pub ball_bound: f64,
    /// `(m / ⌊(m−1)/2⌋)^{−m}`; zero when the floor vanishes.
    pub middle: f64,
    pub power_of_two: f64,
    pub descending: bool,
}

pub fn bound_chain(m: usize) -> Result<BoundChain> {
    let ball_bound = rational_to_f64(&result2_bound(m)?);
    let r = (m - 1) / 2;
    let middle = if r == 0 {
        0.0
    } else {
        (m as f64 / r as f64).powi(-(m as i32))
    };
    let power_of_two = 2f64.powi(-(m as i32));
    Ok(BoundChain {
        m,
        ball_bound,
        middle,
        power_of_two,
        descending: ball_bound <= middle && middle <= power_of_two,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductBoundReport {
    pub m: usize,
    pub min_hamming: usize,
    /// Member probabilities, descending.
    pub probabilities: Vec<f64>,
    pub tail: f64,
    pub bound: f64,
    /// `bound − tail`; non-negative when the bound holds.
    pub margin: f64,
    pub holds: bool,
}

/// Checks `Σ_{i≥2} p_i ≤ result2_bound(m)` for one class.
pub fn verify_product_bound(dist: &ProductDistribution, class: &[u64], m: usize) -> Result<ProductBoundReport> {
    let cert = DfsCertificate::new(class.to_vec(), m)?;
    let mut probabilities: Vec<f64> = class.iter().map(|&z| dist.prob(z)).collect();
    probabilities.sort_by(|a, b| b.total_cmp(a));
    let tail: f64 = probabilities.iter().skip(1).sum();
    let bound = rational_to_f64(&result2_bound(m)?);
    let margin = bound - tail;
    Ok(ProductBoundReport {
        m,
        min_hamming: cert.min_hamming,
        probabilities,
        tail,
        bound,
        margin,
        holds: margin >= -1e-12,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherTermReport {
    /// `4 p_κ Var(g)` with `p_κ = Σ p_i`.
    pub lhs: f64,
    pub spec_width: f64,
    pub tail: f64,
    /// `2 w² Σ_{i≥2} p_i`: holds when the likeliest member carries at most half the block.
    pub bound_balanced: f64,
    /// `4 w² Σ_{i≥2} p_i`: holds for every block.
    pub bound_general: f64,
    pub balanced: bool,
    pub holds_balanced: bool,
    pub holds_general: bool,
}

/// `p[i]` are unnormalized member probabilities, `g[i]` their signal couplings.
pub fn fisher_term_bound(p: &[f64], g: &[f64]) -> Result<FisherTermReport> {
    if p.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: g.len(),
        });
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
    let total: f64 = p.iter().sum();
    let (lhs, spec_width) = if total > 0.0 {
        let mean = p.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() / total;
        let var_sum: f64 = p.iter().zip(g).map(|(a, b)| a * (b - mean).powi(2)).sum();
        let (lo, hi) = g.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        (4.0 * var_sum, hi - lo)
    } else {
        (0.0, 0.0)
    };
    let tail: f64 = order.iter().skip(1).map(|&i| p[i]).sum();
    let w2 = spec_width * spec_width;
    let slack = 1e-12 * (1.0 + lhs.abs());
    let balanced = order.first().map_or(true, |&i| p[i] <= total / 2.0 + 1e-15);
    Ok(FisherTermReport {
        lhs,
        spec_width,
        tail,
        bound_balanced: 2.0 * w2 * tail,
        bound_general: 4.0 * w2 * tail,
        balanced,
        holds_balanced: lhs <= 2.0 * w2 * tail + slack,
        holds_general: lhs <= 4.0 * w2 * tail + slack,
    })
}

/// Complex noise phasors restricted to sensors, as a `d × n` matrix.
fn noise_matrix(scenario: &Scenario) -> DMatrix<Complex64> {
    let noise: Vec<_> = scenario.noise().collect();
    let n = scenario.n();
    DMatrix::from_fn(noise.len(), n, |j, i| phasor_at(noise[j], scenario.sensors.position(i)))
}

fn complex_rank(m: &DMatrix<Complex64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-9 * max).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalCount {
    pub m: usize,
    /// False when the subset search was cut short; `m` is then an upper bound.
    pub exhaustive: bool,
    /// A subset of size `m` whose noise columns are dependent, if any.
    pub witness: Option<Vec<usize>>,
}

pub const EXHAUSTIVE_N_MAX: usize = 12;
const SUBSET_BUDGET: usize = 1 << 16;

/// Smallest sensor subset whose noise phasor columns are linearly dependent;
/// such a subset admits a control that cancels every noise wave at any phase.
pub fn minimal_sensor_count(scenario: &Scenario) -> Result<MinimalCount> {
    let n = scenario.n();
    if n > crate::dfsbuild::N_MAX {
        return Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap: crate::dfsbuild::N_MAX,
        });
    }
    let full = noise_matrix(scenario);
    if full.nrows() == 0 {
        return Ok(MinimalCount {
            m: 1,
            exhaustive: true,
            witness: Some(vec![0]),
        });
    }
    let crank = complex_rank(&full);
    let mut examined = 0usize;
    for s in 1..=n.min(crank + 1) {
        let mut subset: Vec<usize> = (0..s).collect();
        loop {
            if n > EXHAUSTIVE_N_MAX && examined >= SUBSET_BUDGET {
                break;
            }
            examined += 1;
            let cols = full.select_columns(subset.iter());
            if complex_rank(&cols) < s {
                return Ok(MinimalCount {
                    m: s,
                    exhaustive: true,
                    witness: Some(subset),
                });
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    if crank + 1 <= n {
        // Any crank+1 columns are dependent.
        Ok(MinimalCount {
            m: crank + 1,
            exhaustive: n <= EXHAUSTIVE_N_MAX || examined < SUBSET_BUDGET,
            witness: Some((0..=crank).collect()),
        })
    } else {
        Ok(MinimalCount {
            m: n + 1,
            exhaustive: true,
            witness: None,
        })
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UniqueDfsReport {
    Skipped { n: usize, m: usize },
    Checked {
        n: usize,
        /// Classes with nonzero signal spectral width.
        useful_classes: Vec<Vec<u64>>,
        largest_class: usize,
        unique: bool,
    },
}

impl UniqueDfsReport {
    pub fn passed(&self) -> bool {
        match self {
            UniqueDfsReport::Skipped { .. } => true,
            UniqueDfsReport::Checked { unique, .. } => *unique,
        }
    }
}

/// For `n = m`: builds the all-ones plan and checks that `{z, −z}` is the
/// only class on which the signal has nonzero spread.
pub fn unique_dfs_check(scenario: &Scenario) -> Result<UniqueDfsReport> {
    let n = scenario.n();
    let mc = minimal_sensor_count(scenario)?;
    if mc.m != n {
        return Ok(UniqueDfsReport::Skipped { n, m: mc.m });
    }
    let z = SignString::all_ones(n);
    let plan = build_dfs_plan(scenario, &z, &FieldMode::UnknownPhases)?;
    let unknown = with_unknown_noise_phases(scenario);
    let part = enumerate_affine_dfs(&unknown, &plan.fast, None)?;
    let width_tol = 1e-9 * plan.signal_coupling_fast.abs();
    let useful: Vec<Vec<u64>> = part
        .classes
        .iter()
        .filter(|c| c.spectral_width() > width_tol)
        .map(|c| c.members.clone())
        .collect();
    let all = (1u64 << n) - 1;
    let unique = useful.len() == 1 && useful[0] == vec![0, all];
    Ok(UniqueDfsReport::Checked {
        n,
        largest_class: part.classes.iter().map(|c| c.len()).max().unwrap_or(0),
        useful_classes: useful,
        unique,
    })
}

/// Same scenario with every noise wave flagged as having an unknown phase.
pub fn with_unknown_noise_phases(scenario: &Scenario) -> Scenario {
    let mut s = scenario.clone();
    for w in &mut s.waves {
        if w.role == crate::wavefield::Role::Noise {
            w.field.phase_known = false;
        }
    }
    s
}

/// Minimum within-class pairwise Hamming distance over all classes with ≥ 2 members.
pub fn partition_min_hamming(partition: &DfsPartition) -> usize {
    partition
        .classes
        .iter()
        .map(|c| min_pairwise_hamming(&c.members))
        .min()
        .unwrap_or(usize::MAX)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub samples: usize,
    pub n_max: usize,
    pub seed: u64,
    /// Checks a deliberately wrong inequality; the suite must then report violations.
    pub inject_fault: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            n_max: 12,
            seed: 0,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaKind {
    PairwiseRoots,
    IidBallMinimum,
    SphereAboveComplement,
    BallAroundWeaker,
    InjectedFault,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub lemma: LemmaKind,
    pub trial: usize,
    pub p: Vec<f64>,
    pub z: u64,
    pub z_prime: u64,
    pub radius: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaStats {
    pub lemma: LemmaKind,
    pub checks: usize,
    /// Smallest `rhs − lhs` (or `lhs − rhs` for lower bounds), scaled by the magnitude.
    pub min_margin: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub samples: usize,
    pub seed: u64,
    pub stats: Vec<LemmaStats>,
    pub witnesses: Vec<Witness>,
}

impl SuiteReport {
    pub fn violations(&self) -> usize {
        self.stats.iter().map(|s| s.violations).sum()
    }
}

const CORNERS: [f64; 5] = [0.0, 1e-6, 0.5, 1.0 - 1e-6, 1.0];

fn binom_f(n: usize, k: usize) -> f64 {
    binomial(n, k).to_f64().unwrap_or(f64::INFINITY)
}

struct Check {
    lemma: LemmaKind,
    /// Positive when the inequality holds.
    margin: f64,
    lhs: f64,
    rhs: f64,
    z: u64,
    z_prime: u64,
    radius: usize,
}

fn relative(big: f64, small: f64) -> f64 {
    (big - small) / (1.0 + big.abs().max(small.abs()))
}

fn trial_checks(dist: &ProductDistribution, z: u64, zp: u64, rng: &mut ChaCha8Rng, inject: bool) -> Vec<Check> {
    let n = dist.n();
    let all = (1u64 << n) - 1;
    let mut out = Vec::new();
    let delta = hamming_mask(z, zp);
    let (pz, pzp) = (dist.prob(z), dist.prob(zp));

    if delta > 0 {
        let e = 1.0 / delta as f64;
        let lhs = pz.powf(e) + pzp.powf(e);
        out.push(Check {
            lemma: LemmaKind::PairwiseRoots,
            margin: relative(1.0, lhs),
            lhs,
            rhs: 1.0,
            z,
            z_prime: zp,
            radius: delta,
        });
    }

    let r = rng.gen_range(0..=n);
    let q = pz.powf(1.0 / n as f64);
    let rhs: f64 = (0..=r).map(|k| binom_f(n, k) * q.powi((n - k) as i32) * (1.0 - q).powi(k as i32)).sum();
    let lhs = dist.ball_probability(z, r);
    out.push(Check {
        lemma: LemmaKind::IidBallMinimum,
        margin: relative(lhs, rhs),
        lhs,
        rhs,
        z,
        z_prime: z,
        radius: r,
    });

    let (hi, lo) = if pz >= dist.prob(!z & all) { (z, !z & all) } else { (!z & all, z) };
    let (p_hi, p_lo) = (dist.prob(hi), dist.prob(lo));
    let d = rng.gen_range(0..=n);
    let t = d as f64 / n as f64;
    let rhs = binom_f(n, d) * p_lo.powf(1.0 - t) * p_hi.powf(t);
    let lhs = dist.sphere_probability(lo, d);
    out.push(Check {
        lemma: LemmaKind::SphereAboveComplement,
        margin: relative(lhs, rhs),
        lhs,
        rhs,
        z: hi,
        z_prime: lo,
        radius: d,
    });

    if delta > 0 && pz != pzp {
        let (strong, weak) = if pz > pzp { (z, zp) } else { (zp, z) };
        let (ps, pw) = (pz.max(pzp), pz.min(pzp));
        let d = rng.gen_range(0..delta);
        let lhs = dist.ball_probability(weak, d);
        let tight: f64 = (0..=d)
            .map(|k| {
                let t = k as f64 / delta as f64;
                binom_f(delta, k) * ps.powf(t) * pw.powf(1.0 - t)
            })
            .sum();
        let loose = pw * (0..=d).map(|k| binom_f(delta, k)).sum::<f64>();
        for rhs in [tight, loose] {
            out.push(Check {
                lemma: LemmaKind::BallAroundWeaker,
                margin: relative(lhs, rhs),
                lhs,
                rhs,
                z: strong,
                z_prime: weak,
                radius: d,
            });
        }
    }

    if inject {
        // Claims the ball around z has at most the probability of its centre.
        let lhs = dist.ball_probability(z, 1);
        out.push(Check {
            lemma: LemmaKind::InjectedFault,
            margin: relative(pz, lhs),
            lhs,
            rhs: pz,
            z,
            z_prime: z,
            radius: 1,
        });
    }
    out
}

fn random_distribution(n: usize, rng: &mut ChaCha8Rng) -> ProductDistribution {
    let mode = rng.gen_range(0..4);
    let p = match mode {
        // iid: the extremal family of several lemmas
        0 => vec![rng.gen_range(0.0..1.0); n],
        1 => (0..n).map(|_| CORNERS[rng.gen_range(0..CORNERS.len())]).collect(),
        2 => (0..n)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    CORNERS[rng.gen_range(0..CORNERS.len())]
                } else {
                    rng.gen_range(0.0..1.0)
                }
            })
            .collect(),
        _ => (0..n).map(|_| rng.gen_range(0.0..1.0)).collect(),
    };
    ProductDistribution { p }
}

const VIOLATION_TOL: f64 = 1e-12;

/// Randomized checks of the product-distribution lemmas; deterministic for a seed.
pub fn lemma_oracle_suite(opts: SuiteOptions) -> SuiteReport {
    let n_max = opts.n_max.clamp(1, 20);
    let per_trial: Vec<(usize, ProductDistribution, Vec<Check>)> = (0..opts.samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(trial as u64);
            let n = rng.gen_range(1..=n_max);
            let dist = random_distribution(n, &mut rng);
            let all = (1u64 << n) - 1;
            let z = rng.gen_range(0..=all);
            let zp = if rng.gen_bool(0.25) { !z & all } else { rng.gen_range(0..=all) };
            let checks = trial_checks(&dist, z, zp, &mut rng, opts.inject_fault);
            (trial, dist, checks)
        })
        .collect();

    let mut stats: Vec<LemmaStats> = Vec::new();
    let mut witnesses = Vec::new();
    for (trial, dist, checks) in per_trial {
        for c in checks {
            let entry = match stats.iter_mut().position(|s| s.lemma == c.lemma) {
                Some(i) => &mut stats[i],
                None => {
                    stats.push(LemmaStats {
                        lemma: c.lemma,
                        checks: 0,
                        min_margin: f64::INFINITY,
                        violations: 0,
                    });
                    stats.last_mut().unwrap()
                }
            };
            entry.checks += 1;
            entry.min_margin = entry.min_margin.min(c.margin);
            if c.margin < -VIOLATION_TOL || c.margin.is_nan() {
                entry.violations += 1;
                if witnesses.len() < 50 {
                    witnesses.push(Witness {
                        lemma: c.lemma,
                        trial,
                        p: dist.p.clone(),
                        z: c.z,
                        z_prime: c.z_prime,
                        radius: c.radius,
                        lhs: c.lhs,
                        rhs: c.rhs,
                    });
                }
            }
        }
    }
    SuiteReport {
        samples: opts.samples,
        seed: opts.seed,
        stats,
        witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_examples() {
        let a = SignString::new(vec![1, 1, -1]).unwrap();
        let b = SignString::new(vec![1, -1, -1]).unwrap();
        assert_eq!(hamming(&a, &b).unwrap(), 1);
        assert_eq!(hamming(&a, &a).unwrap(), 0);
        assert_eq!(hamming(&a, &a.negated()).unwrap(), 3);
        assert!(hamming(&a, &SignString::all_ones(2)).is_err());
    }

    #[test]
    fn ball_volume_examples() {
        assert_eq!(ball_volume(3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(ball_volume(5, 2).unwrap(), BigUint::from(16u32));
        assert_eq!(ball_volume(7, 7).unwrap(), BigUint::from(128u32));
        assert!(ball_volume(3, 4).is_err());
    }

    #[test]
    fn result2_examples() {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(result2_bound(3).unwrap(), r(1, 4));
        assert_eq!(result2_bound(5).unwrap(), r(1, 16));
        assert_eq!(result2_bound(1).unwrap(), r(1, 1));
        for m in [3usize, 5, 7, 9, 11] {
            assert_eq!(result2_bound(m).unwrap(), r(1, 1 << (m - 1)));
        }
    }

    #[test]
    fn chain_is_not_descending_at_small_m() {
        let c = bound_chain(3).unwrap();
        assert!(!c.descending);
        assert!(c.middle < c.ball_bound);
    }

    #[test]
    fn product_bound_examples() {
        let plus = ProductDistribution::iid(0.5, 3).unwrap();
        let r = verify_product_bound(&plus, &[0, 7], 3).unwrap();
        assert!((r.tail - 0.125).abs() < 1e-15);
        assert!(r.holds);
        let point = ProductDistribution::iid(1.0, 3).unwrap();
        assert_eq!(verify_product_bound(&point, &[0, 7], 3).unwrap().tail, 0.0);
        assert!(matches!(
            verify_product_bound(&plus, &[0, 1], 3),
            Err(Error::HammingPrecondition { found: 1, required: 3 })
        ));
    }

    #[test]
    fn fisher_term_examples() {
        let g = 1.3;
        let q = 0.4;
        let r = fisher_term_bound(&[q / 2.0, q / 2.0], &[g, -g]).unwrap();
        assert!((r.lhs - 4.0 * q * g * g).abs() < 1e-14);
        assert!((r.bound_balanced - r.lhs).abs() < 1e-14);
        let single = fisher_term_bound(&[0.3], &[2.0]).unwrap();
        assert_eq!(single.lhs, 0.0);
        assert!(single.holds_general);
    }

    #[test]
    fn fisher_term_unbalanced_counterexample() {
        let g = 1.0;
        let r = fisher_term_bound(&[0.9, 0.1], &[g, -g]).unwrap();
        assert!((r.lhs - 1.44).abs() < 1e-12);
        assert!(!r.balanced);
        assert!(!r.holds_balanced);
        assert!(r.holds_general);
    }

    #[test]
    fn distributions() {
        let d = ProductDistribution::new(vec![0.2, 0.7, 0.5]).unwrap();
        let total: f64 = (0..8).map(|m| d.prob(m)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        let brute: f64 = (0..8u64).filter(|m| hamming_mask(*m, 5) <= 1).map(|m| d.prob(m)).sum();
        assert!((d.ball_probability(5, 1) - brute).abs() < 1e-15);
        assert!(ProductDistribution::new(vec![1.5]).is_err());
    }

    #[test]
    fn small_suite_and_fault() {
        let ok = lemma_oracle_suite(SuiteOptions {
            samples: 2000,
            ..Default::default()
        });
        assert_eq!(ok.violations(), 0, "{:?}", ok.witnesses.first());
        let bad = lemma_oracle_suite(SuiteOptions {
            samples: 200,
            inject_fault: true,
            ..Default::default()
        });
        assert!(bad.violations() > 0);
    }
}
