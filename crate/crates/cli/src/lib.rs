//! Command-line front end for `wavedfs`.

pub mod commands;
pub mod config;
pub mod output;
pub mod scaling;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::commands::{Outcome, RunOptions};
use crate::config::{Scaling, ScenarioConfig};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "wavedfs", version, about = "Decoherence-free sensing with qubit networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario JSON.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Also render SVG plots.
    #[arg(long, global = true)]
    pub svg: bool,
    /// Replace a proven inequality with a false one to exercise failure reporting.
    #[arg(long, global = true, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    Minimal,
    Linear,
    Quadratic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a DFS control plan and its coupling spectrum.
    BuildDfs,
    /// Approximate DFS on a circular array for a list of sizes.
    Circular {
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Sensor placement that cancels the configured noise waves.
    Placement,
    /// Entangled versus product-state Fisher information.
    Scaling {
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
        #[arg(long, value_enum)]
        mode: Option<ScalingArg>,
    },
    /// Randomized and exhaustive checks of the separable-state bounds.
    Bounds {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Coupling spectrum of the configured control.
    Spectrum,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BuildDfs => "build-dfs",
            Command::Circular { .. } => "circular",
            Command::Placement => "placement",
            Command::Scaling { .. } => "scaling",
            Command::Bounds { .. } => "bounds",
            Command::Spectrum => "spectrum",
        }
    }

    fn needs_config(&self) -> bool {
        matches!(self, Command::BuildDfs | Command::Placement | Command::Spectrum)
    }
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub scenario_hash: String,
    pub command: String,
    pub seed: u64,
    pub outputs: Vec<PathBuf>,
    pub violations: Vec<String>,
    pub wall_time_s: f64,
    pub version: String,
    pub summary: serde_json::Value,
}

/// Loads the config and applies command-line overrides.
pub fn resolve_config(cli: &Cli) -> anyhow::Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p)?,
        None if cli.command.needs_config() => anyhow::bail!("{} needs --config", cli.command.name()),
        None => ScenarioConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match &cli.command {
        Command::Circular { n, grid } => {
            if let Some(n) = n {
                cfg.circular.n = n.clone();
            }
            if let Some(g) = grid {
                cfg.circular.grid = *g;
            }
        }
        Command::Scaling { m, mode } => {
            if let Some(m) = m {
                cfg.scaling.m = m.clone();
            }
            if let Some(mode) = mode {
                cfg.scaling.mode = match mode {
                    ScalingArg::Minimal => Scaling::Minimal,
                    ScalingArg::Linear => Scaling::Linear,
                    ScalingArg::Quadratic => Scaling::Quadratic,
                };
            }
        }
        Command::Bounds { samples: Some(s) } => cfg.bounds.samples = *s,
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: &Cli) -> anyhow::Result<RunRecord> {
    let start = Instant::now();
    let cfg = resolve_config(cli)?;
    commands::ensure_dir(&cli.out)?;
    let opts = RunOptions {
        out: cli.out.clone(),
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        svg: cli.svg,
        inject_fault: cli.inject_fault,
    };
    let outcome: Outcome = match &cli.command {
        Command::BuildDfs => commands::build_dfs(&cfg, &opts)?,
        Command::Circular { .. } => commands::circular(&cfg, &opts)?,
        Command::Placement => commands::placement_cmd(&cfg, &opts)?,
        Command::Scaling { .. } => commands::scaling_cmd(&cfg, &opts)?,
        Command::Bounds { .. } => commands::bounds(&cfg, &opts)?,
        Command::Spectrum => commands::spectrum(&cfg, &opts)?,
    };
    Ok(RunRecord {
        scenario_hash: cfg.hash(),
        command: cli.command.name().into(),
        seed: cfg.seed,
        outputs: outcome.outputs,
        violations: outcome.violations,
        wall_time_s: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").into(),
        summary: outcome.summary,
    })
}
