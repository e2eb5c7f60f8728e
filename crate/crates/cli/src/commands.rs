//! One function per verb. Each writes its artifacts under the output
//! directory and reports any violated check instead of failing outright.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use wavedfs::bounds::{
    bound_chain, fisher_term_bound, lemma_oracle_suite, min_pairwise_hamming, minimal_sensor_count,
    rational_to_f64, result2_bound, unique_dfs_check, verify_product_bound, with_unknown_noise_phases,
    ProductDistribution, SuiteOptions,
};
use wavedfs::control::{
    coupling_from_phasors, coupling_spectrum, coupling_strength, lockin_sequence, wave_lock_sequence,
    ControlSequence, ProbeFamily,
};
use wavedfs::dfsbuild::{build_dfs_plan, build_stacked_plan, circular_adfs, enumerate_affine_dfs, linspace, placement, DfsPlan};
use wavedfs::metrology::{dephasing_factor, qfi_ghz, AmplitudeDistribution, CfiOptions, NoiseTerm, ResidualCoupling};
use wavedfs::wavefield::{phasor_at, MonochromaticField, PlaneWave, Scenario, SensorArray, SignString, Wave};

use crate::config::{ControlMode, ProbeParameter, ScenarioConfig};
use crate::output::{write_json, write_table, Format, LinePlot, Series};
use crate::scaling;

pub struct RunOptions {
    pub out: PathBuf,
    pub format: Format,
    pub svg: bool,
    pub inject_fault: bool,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub violations: Vec<String>,
    pub summary: Value,
}

fn svg(opts: &RunOptions, outcome: &mut Outcome, name: &str, plot: LinePlot) -> anyhow::Result<()> {
    if opts.svg {
        let path = opts.out.join(name);
        crate::output::write_atomic(&path, plot.render().as_bytes())?;
        outcome.outputs.push(path);
    }
    Ok(())
}

fn series(name: &str, x: &[f64], y: impl Iterator<Item = f64>) -> Series {
    Series {
        name: name.into(),
        points: x.iter().copied().zip(y).collect(),
    }
}

fn signal_k_mag(cfg: &ScenarioConfig) -> anyhow::Result<f64> {
    if let Some(k) = cfg.spectrum.k_mag {
        return Ok(k);
    }
    Ok(cfg.signal_plane_wave().context("spectrum.k_mag is needed when the signal is not a plane wave")?.k_norm())
}

/// Probe families for the cosine and sine quadratures.
fn families(cfg: &ScenarioConfig) -> anyhow::Result<[ProbeFamily; 2]> {
    Ok(match cfg.spectrum.family {
        ProbeParameter::Direction => {
            let k_mag = signal_k_mag(cfg)?;
            [0.0, PI / 2.0].map(|phi| ProbeFamily::Direction {
                omega: cfg.omega,
                k_mag,
                phi,
            })
        }
        ProbeParameter::Frequency => {
            let k = cfg.signal_plane_wave()?.kvec;
            [0.0, PI / 2.0].map(|phi| ProbeFamily::Frequency { kvec: k.clone(), phi })
        }
    })
}

fn spectrum_grid(cfg: &ScenarioConfig) -> anyhow::Result<Vec<f64>> {
    let s = &cfg.spectrum;
    if s.points == 0 {
        bail!("spectrum.points must be positive");
    }
    Ok(linspace(s.from, s.to, s.points))
}

fn g2_column(z: &SignString, c: &ControlSequence, sensors: &SensorArray, fam: &ProbeFamily, grid: &[f64]) -> anyhow::Result<Vec<f64>> {
    Ok(coupling_spectrum(z, c, sensors, fam, grid)?.into_iter().map(|(_, g2)| g2).collect())
}

fn build_plan(cfg: &ScenarioConfig, s: &Scenario) -> anyhow::Result<DfsPlan> {
    let states = cfg.protected_states(s.n())?;
    let plan = if states.len() > 1 {
        build_stacked_plan(s, &states, cfg.any_unknown_phase())?
    } else {
        build_dfs_plan(s, &states[0], &cfg.field_mode()?)?
    };
    Ok(plan)
}

/// Residual couplings of every noise wave to `control`, both quadratures for unknown phases.
fn residuals(z: &SignString, control: &ControlSequence, s: &Scenario) -> Vec<ResidualCoupling> {
    s.noise()
        .map(|f| {
            let c: Vec<Complex64> = s.sensors.positions().iter().map(|x| phasor_at(f, x)).collect();
            let g = coupling_from_phasors(z, control, &c, f.omega);
            if f.phase_known {
                ResidualCoupling::Known(g)
            } else {
                let ic: Vec<Complex64> = c.iter().map(|v| v * Complex64::i()).collect();
                ResidualCoupling::Unknown {
                    cos: g,
                    sin: coupling_from_phasors(z, control, &ic, f.omega),
                }
            }
        })
        .collect()
}

#[derive(Serialize)]
struct PlanDocument<'a> {
    scenario_hash: &'a str,
    plan: &'a DfsPlan,
    sensor_controls: Vec<wavedfs::dfsbuild::SensorControl>,
    ghz_qfi_fast: f64,
    ghz_dephasing: [f64; 2],
}

pub fn build_dfs(cfg: &ScenarioConfig, opts: &RunOptions) -> anyhow::Result<Outcome> {
    let s = cfg.scenario()?;
    let plan = build_plan(cfg, &s)?;
    let hash = cfg.hash();
    let mut out = Outcome::default();

    let dist = cfg.noise_model.unwrap_or(AmplitudeDistribution::StrongNoise);
    let noise: Vec<NoiseTerm> = s
        .noise()
        .map(|f| NoiseTerm {
            distribution: dist,
            phase_known: f.phase_known,
        })
        .collect();
    let d = dephasing_factor(&noise, &residuals(&plan.z, &plan.fast, &s))?;
    let doc = PlanDocument {
        scenario_hash: &hash,
        plan: &plan,
        sensor_controls: plan.sensor_controls(),
        ghz_qfi_fast: qfi_ghz(plan.signal_coupling_fast, d),
        ghz_dephasing: [d.re, d.im],
    };
    out.outputs.push(write_json(&opts.out.join("plan.json"), &doc)?);

    let tol = 1e-9 * plan.signal_coupling_fast.abs();
    if plan.max_noise_coupling_fast > tol {
        out.violations.push(format!("fast control noise coupling {:e} exceeds {:e}", plan.max_noise_coupling_fast, tol));
    }
    if let (Some(gn), Some(gs)) = (plan.max_noise_coupling_slow, plan.signal_coupling_slow) {
        if gn > 1e-9 * gs.abs() {
            out.violations.push(format!("slow control noise coupling {gn:e} exceeds tolerance"));
        }
    }

    let grid = spectrum_grid(cfg)?;
    let fams = families(cfg)?;
    let mut cols = vec![grid.clone()];
    for control in [Some(&plan.fast), plan.slow.as_ref()] {
        for fam in &fams {
            cols.push(match control {
                Some(c) => g2_column(&plan.z, c, &s.sensors, fam, &grid)?,
                None => vec![f64::NAN; grid.len()],
            });
        }
    }
    let rows = transpose(&cols);
    let header = ["alpha", "g2_fast_cos", "g2_fast_sin", "g2_slow_cos", "g2_slow_sin"];
    out.outputs.push(write_table(&opts.out, "spectrum", opts.format, &hash, &header, &rows)?);
    svg(
        opts,
        &mut out,
        "spectrum.svg",
        LinePlot {
            title: "Squared coupling".into(),
            x_label: param_label(cfg).into(),
            y_label: "g²".into(),
            log_y: true,
            series: header[1..]
                .iter()
                .enumerate()
                .map(|(i, h)| series(h, &grid, cols[i + 1].iter().copied()))
                .collect(),
        },
    )?;
    out.summary = json!({
        "amplitudes": plan.amplitudes,
        "phases": plan.phases,
        "signal_coupling_fast": plan.signal_coupling_fast,
        "signal_coupling_slow": plan.signal_coupling_slow,
        "max_noise_coupling_fast": plan.max_noise_coupling_fast,
        "slow_to_fast_ratio": plan.slow_to_fast_ratio(),
    });
    Ok(out)
}

fn param_label(cfg: &ScenarioConfig) -> &'static str {
    match cfg.spectrum.family {
        ProbeParameter::Direction => "direction α (rad)",
        ProbeParameter::Frequency => "angular frequency ω′",
    }
}

fn transpose(cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..cols[0].len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

pub fn spectrum(cfg: &ScenarioConfig, opts: &RunOptions) -> anyhow::Result<Outcome> {
    let s = cfg.scenario()?;
    let n = s.n();
    let z = cfg.protected_states(n)?.remove(0);
    let control = match cfg.control {
        ControlMode::Fast => build_plan(cfg, &s)?.fast,
        ControlMode::Slow => build_plan(cfg, &s)?
            .slow
            .context("slow control needs phasor signal components")?,
        ControlMode::Lockin => lockin_sequence(cfg.omega, s.duration(), n)?,
        ControlMode::Wavelock => wave_lock_sequence(&cfg.signal_plane_wave()?, &s.sensors, s.duration())?,
    };
    let grid = spectrum_grid(cfg)?;
    let fams = families(cfg)?;
    let cols = vec![
        grid.clone(),
        g2_column(&z, &control, &s.sensors, &fams[0], &grid)?,
        g2_column(&z, &control, &s.sensors, &fams[1], &grid)?,
    ];
    let hash = cfg.hash();
    let mut out = Outcome::default();
    let header = ["parameter", "g2_cos", "g2_sin"];
    out.outputs.push(write_table(&opts.out, "spectrum", opts.format, &hash, &header, &transpose(&cols))?);
    svg(
        opts,
        &mut out,
        "spectrum.svg",
        LinePlot {
            title: format!("Squared coupling, {:?} control", cfg.control),
            x_label: param_label(cfg).into(),
            y_label: "g²".into(),
            log_y: true,
            series: vec![
                series("cos", &grid, cols[1].iter().copied()),
                series("sin", &grid, cols[2].iter().copied()),
            ],
        },
    )?;
    let signal = s.signal().ok().map(|f| coupling_strength(&z, &control, &s.sensors, f)).transpose()?;
    out.summary = json!({ "signal_coupling": signal, "points": grid.len() });
    Ok(out)
}

pub fn circular(cfg: &ScenarioConfig, opts: &RunOptions) -> anyhow::Result<Outcome> {
    let hash = cfg.hash();
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for &n in &cfg.circular.n {
        let r = circular_adfs(n, cfg.circular.grid).with_context(|| format!("n = {n}"))?;
        let rel = r.virtual_noise_coupling / r.plan.signal_coupling_fast.abs();
        if r.virtual_noise_coupling >= 1e-8 {
            out.violations.push(format!("n = {n}: virtual noise coupling {:e}", r.virtual_noise_coupling));
        }
        rows.push(vec![n as f64, r.snr.signal_g2, r.snr.max_noise_g2, r.snr.snr, r.virtual_noise_coupling, rel]);
    }
    let header = ["n", "signal_g2", "max_noise_g2", "snr", "virtual_noise_coupling", "virtual_noise_relative"];
    out.outputs.push(write_table(&opts.out, "circular", opts.format, &hash, &header, &rows)?);
    let ns: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    svg(
        opts,
        &mut out,
        "circular.svg",
        LinePlot {
            title: "Circular array, approximate DFS".into(),
            x_label: "n".into(),
            y_label: "value".into(),
            log_y: true,
            series: vec![
                series("signal g²", &ns, rows.iter().map(|r| r[1])),
                series("SNR", &ns, rows.iter().map(|r| r[3])),
            ],
        },
    )?;
    out.summary = json!({ "snr": rows.iter().map(|r| r[3]).collect::<Vec<_>>() });
    Ok(out)
}

pub const PLACEMENT_D_MAX: usize = 10;
const SWEEP_PHASES: usize = 16;

pub fn placement_cmd(cfg: &ScenarioConfig, opts: &RunOptions) -> anyhow::Result<Outcome> {
    let noise = cfg.noise_plane_waves()?;
    if noise.is_empty() {
        bail!("placement needs noise waves in the config");
    }
    if noise.len() > PLACEMENT_D_MAX {
        bail!("placement supports at most {PLACEMENT_D_MAX} noise waves, got {}", noise.len());
    }
    let sensors = placement(&noise, &cfg.placement.x0)?;
    let n = sensors.len();
    let t = 2.0 * PI * cfg.periods as f64 / cfg.omega;
    let control = lockin_sequence(cfg.omega, t, n)?;
    let z = SignString::all_ones(n);
    let hash = cfg.hash();
    let mut out = Outcome::default();

    let mut worst: f64 = 0.0;
    for w in &noise {
        for k in 0..SWEEP_PHASES {
            let phi = 2.0 * PI * k as f64 / SWEEP_PHASES as f64;
            let probe: MonochromaticField = PlaneWave::new(w.omega, w.kvec.clone(), phi)?.into();
            worst = worst.max(coupling_strength(&z, &control, &sensors, &probe)?.abs());
        }
    }
    if worst >= 1e-10 {
        out.violations.push(format!("noise coupling {worst:e} after placement"));
    }
    let rows: Vec<Vec<f64>> = sensors.positions().to_vec();
    let header: Vec<String> = (0..rows[0].len()).map(|i| ["x", "y", "z"][i].to_string()).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    out.outputs.push(write_table(&opts.out, "sensors", opts.format, &hash, &header, &rows)?);

    let k_mag = cfg.spectrum.k_mag.unwrap_or_else(|| noise[0].k_norm());
    let grid = linspace(0.0, 2.0 * PI, cfg.placement.points.max(1));
    let cols: Vec<Vec<f64>> = std::iter::once(Ok(grid.clone()))
        .chain([0.0, PI / 2.0].map(|phi| g2_column(&z, &control, &sensors, &ProbeFamily::Direction { omega: cfg.omega, k_mag, phi }, &grid)))
        .collect::<anyhow::Result<_>>()?;
    out.outputs.push(write_table(&opts.out, "spectrum", opts.format, &hash, &["alpha", "g2_cos", "g2_sin"], &transpose(&cols))?);
    svg(
        opts,
        &mut out,
        "spectrum.svg",
        LinePlot {
            title: format!("GHZ direction sensitivity, {n} sensors"),
            x_label: "direction α (rad)".into(),
            y_label: "g²".into(),
            log_y: true,
            series: vec![
                series("cos", &grid, cols[1].iter().copied()),
                series("sin", &grid, cols[2].iter().copied()),
            ],
        },
    )?;
    let signal = cfg
        .scenario()
        .ok()
        .and_then(|s| s.signal().ok().cloned())
        .map(|f| coupling_strength(&z, &control, &sensors, &f))
        .transpose()?;
    out.summary = json!({ "sensors": n, "max_noise_coupling": worst, "signal_coupling": signal });
    Ok(out)
}

pub fn scaling_cmd(cfg: &ScenarioConfig, opts: &RunOptions) -> anyhow::Result<Outcome> {
    let sc = &cfg.scaling;
    if sc.m.is_empty() {
        bail!("scaling.m is empty");
    }
    let cfi = CfiOptions {
        restarts: sc.restarts,
        budget: sc.budget,
        seed: cfg.seed,
        theta: 0.0,
    };
    let hash = cfg.hash();
    let mut out = Outcome::default();
    let mut results = Vec::new();
    for &m in &sc.m {
        let n = scaling::sensor_count(m, sc.mode);
        if n > scaling::N_MAX {
            bail!("m = {m} needs {n} sensors, above the cap of {}", scaling::N_MAX);
        }
        let row = scaling::run(m, sc.mode, cfi).with_context(|| format!("m = {m}"))?;
        if let Some(c) = row.cfi_prod {
            if c > row.qfi_prod * (1.0 + 1e-9) + 1e-12 {
                out.violations.push(format!("m = {m}: CFI {c} exceeds QFI {}", row.qfi_prod));
            }
        }
        results.push(row);
    }
    let rows: Vec<Vec<f64>> = results
        .iter()
        .map(|r| {
            let [a, b, c] = r.per_sensor();
            vec![r.m as f64, r.n as f64, r.qfi_ent, r.qfi_prod, r.cfi_prod.unwrap_or(f64::NAN), a, b, c]
        })
        .collect();
    let header = ["m", "n", "qfi_ent", "qfi_prod", "cfi_prod", "qfi_ent_per_n", "qfi_prod_per_n", "cfi_prod_per_n"];
    out.outputs.push(write_table(&opts.out, "scaling", opts.format, &hash, &header, &rows)?);
    let ms: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    svg(
        opts,
        &mut out,
        "scaling.svg",
        LinePlot {
            title: format!("Fisher information per sensor, {:?} scaling", sc.mode),
            x_label: "m".into(),
            y_label: "F / n".into(),
            log_y: true,
            series: vec![
                series("entangled QFI", &ms, rows.iter().map(|r| r[5])),
                series("product QFI", &ms, rows.iter().map(|r| r[6])),
                series("product CFI", &ms, rows.iter().map(|r| r[7])),
            ],
        },
    )?;
    let slope = (ms.len() > 1).then(|| scaling::log_slope(&ms, &rows.iter().map(|r| r[6]).collect::<Vec<_>>()));
    out.summary = json!({
        "rows": results,
        "log_slope_qfi_prod_per_n": slope,
        "noise_tie_breaking": "equidistant candidates resolve toward the smaller angle",
    });
    Ok(out)
}

/// Unknown-phase noise in random directions on random positions.
pub fn random_scenario(n: usize, d: usize, seed: u64) -> anyhow::Result<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sensors =
        SensorArray::new((0..n).map(|_| vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]).collect())?;
    let mut waves = Vec::new();
    for _ in 0..d {
        let w = PlaneWave::from_direction(1.0, rng.gen_range(0.5..1.5), rng.gen_range(0.0..2.0 * PI), 0.0)?;
        waves.push(Wave::noise(w.with_unknown_phase()));
    }
    waves.push(Wave::signal(PlaneWave::from_direction(1.0, 1.0, PI / 4.0, 0.0)?));
    Ok(Scenario::new(sensors, waves, 1.0, 3)?)
}

/// Two sensors under one spatially uniform noise field.
pub fn global_noise_scenario() -> anyhow::Result<Scenario> {
    let sensors = SensorArray::new(vec![vec![0.0, 0.0], vec![1.0, 0.3]])?;
    let waves = vec![
        Wave::noise(PlaneWave::new(1.0, vec![0.0, 0.0], 0.0)?.with_unknown_phase()),
        Wave::signal(PlaneWave::new(1.0, vec![1.0, 0.0], 0.0)?),
    ];
    Ok(Scenario::new(sensors, waves, 1.0, 3)?)
}

#[derive(Debug, Serialize)]
struct SweepEntry {
    n: usize,
    d: usize,
    m: usize,
    classes_checked: usize,
    min_hamming: Option<usize>,
    min_margin: f64,
}

pub fn bounds(cfg: &ScenarioConfig, opts: &RunOptions) -> anyhow::Result<Outcome> {
    let bc = &cfg.bounds;
    let hash = cfg.hash();
    let mut out = Outcome::default();

    let suite = lemma_oracle_suite(SuiteOptions {
        samples: bc.samples,
        n_max: bc.n_max,
        seed: cfg.seed,
        inject_fault: opts.inject_fault,
    });
    for w in &suite.witnesses {
        out.violations.push(format!("{:?} violated in trial {}: lhs {} rhs {}", w.lemma, w.trial, w.lhs, w.rhs));
    }
    if suite.violations() > suite.witnesses.len() {
        out.violations.push(format!("{} lemma violations in total", suite.violations()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut sweep = Vec::new();
    for n in 3..=bc.sweep_n_max {
        let d = (n - 1) / 2;
        let s = random_scenario(n, d, cfg.seed.wrapping_add(n as u64))?;
        let m = minimal_sensor_count(&s)?.m;
        let plan = build_dfs_plan(&s, &SignString::all_ones(n), &wavedfs::wavefield::FieldMode::UnknownPhases)?;
        let part = enumerate_affine_dfs(&with_unknown_noise_phases(&s), &plan.fast, None)?;
        let mut entry = SweepEntry {
            n,
            d,
            m,
            classes_checked: 0,
            min_hamming: None,
            min_margin: f64::INFINITY,
        };
        for class in part.classes.iter().filter(|c| c.len() > 1) {
            let h = min_pairwise_hamming(&class.members);
            entry.min_hamming = Some(entry.min_hamming.map_or(h, |v: usize| v.min(h)));
            if h < m {
                out.violations.push(format!("n = {n}: class at Hamming distance {h} < m = {m}"));
                continue;
            }
            let dists = std::iter::once(ProductDistribution::iid(0.5, n)?)
                .chain((0..bc.distributions_per_class).map(|_| ProductDistribution { p: (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect() }));
            for dist in dists {
                let r = verify_product_bound(&dist, &class.members, m)?;
                entry.min_margin = entry.min_margin.min(r.margin);
                if !r.holds {
                    out.violations.push(format!("n = {n}: product bound fails with margin {}", r.margin));
                }
            }
            entry.classes_checked += 1;
        }
        sweep.push(entry);
    }

    let unique_cases = [global_noise_scenario()?, random_scenario(3, 2, 21)?, random_scenario(4, 3, 22)?];
    let mut unique = Vec::new();
    for s in &unique_cases {
        let r = unique_dfs_check(s)?;
        if !r.passed() || matches!(r, wavedfs::bounds::UniqueDfsReport::Skipped { .. }) {
            out.violations.push(format!("unique DFS check failed for n = {}: {r:?}", s.n()));
        }
        unique.push(r);
    }

    let hand = [(1usize, 1.0), (3, 0.25), (5, 1.0 / 16.0)];
    for (m, want) in hand {
        let got = rational_to_f64(&result2_bound(m)?);
        if got != want {
            out.violations.push(format!("result2_bound({m}) = {got}, expected {want}"));
        }
    }
    let chain: Vec<_> = (1..=8).map(bound_chain).collect::<Result<_, _>>()?;

    let mut fisher_general_failures = 0;
    let mut fisher_balanced_failures = 0;
    let mut unbalanced_factor2_failures = 0;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=10);
        let p: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0) / k as f64).collect();
        let g: Vec<f64> = (0..k).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let r = fisher_term_bound(&p, &g)?;
        fisher_general_failures += usize::from(!r.holds_general);
        if r.balanced {
            fisher_balanced_failures += usize::from(!r.holds_balanced);
        } else {
            unbalanced_factor2_failures += usize::from(!r.holds_balanced);
        }
    }
    if fisher_general_failures + fisher_balanced_failures > 0 {
        out.violations.push(format!(
            "Fisher-term bound failed: {fisher_general_failures} general, {fisher_balanced_failures} balanced"
        ));
    }

    let report = json!({
        "scenario_hash": hash,
        "lemmas": suite,
        "product_bound_sweep": sweep,
        "unique_dfs": unique,
        "result2_hand_values": hand.iter().map(|(m, v)| json!({"m": m, "bound": v})).collect::<Vec<_>>(),
        "bound_chain": chain,
        "fisher_term": {
            "samples": 10_000,
            "general_failures": fisher_general_failures,
            "balanced_failures": fisher_balanced_failures,
            "factor_two_failures_on_unbalanced_blocks": unbalanced_factor2_failures,
        },
        "violations": out.violations,
    });
    out.outputs.push(write_json(&opts.out.join("bounds.json"), &report)?);
    out.summary = json!({ "violations": out.violations.len(), "lemma_checks": report["lemmas"]["stats"] });
    Ok(out)
}

pub fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}
