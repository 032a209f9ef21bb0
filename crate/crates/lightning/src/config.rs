use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use lightning_core::spectral::{CONNECTIVE_CONSTANT_BOUND, DEFAULT_TOL, SAW_MAX_LENGTH};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::grid::{check_grid, parse_grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Sweep,
    Spectral,
    Certify,
    PsiVerify,
    Saw,
    ClusterCount,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Sweep => "sweep",
            Self::Spectral => "spectral",
            Self::Certify => "certify",
            Self::PsiVerify => "psi-verify",
            Self::Saw => "saw",
            Self::ClusterCount => "cluster-count",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Experiments on the lightning percolation model.
#[derive(Debug, Default, Parser)]
#[command(name = "lightning", version, about)]
pub struct Args {
    /// Experiment to run (may instead be given as `command` in the config file)
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Flat JSON file with any of the flag names as keys; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Tolerance ε in [0, 1]
    #[arg(long)]
    pub eps: Option<f64>,

    /// ε grid as start:stop:step
    #[arg(long = "eps-grid")]
    pub eps_grid: Option<String>,

    /// Box half-width
    #[arg(long)]
    pub r: Option<u32>,

    /// Inner radius for cluster-count
    #[arg(long)]
    pub m: Option<u32>,

    /// Middle radius (cluster-count), Ψ box parameter (psi-verify) or walk length (saw)
    #[arg(long)]
    pub n: Option<u32>,

    /// Monte Carlo trials (sampled fields for psi-verify)
    #[arg(long)]
    pub trials: Option<u64>,

    /// Seed of the counter-based generator [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Worker threads [default: all cores]
    #[arg(long)]
    pub threads: Option<usize>,

    /// Share each trial's field across the whole ε grid
    #[arg(long)]
    pub coupled: bool,

    /// Grow r until the cluster relation on B_n stabilizes (cluster-count)
    #[arg(long)]
    pub auto: bool,

    /// Connective-constant bound [default: 2.679192495]
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Width of the spectral-radius enclosure [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,

    /// Grid step for the certified-threshold scan (certify without --eps)
    #[arg(long = "grid-step")]
    pub grid_step: Option<f64>,

    /// Trials for the single-edge break rate in psi-verify [default: 100000]
    #[arg(long = "edge-trials")]
    pub edge_trials: Option<u64>,

    /// Output file, written atomically [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    Range(String),
    Points(Vec<f64>),
}

/// Config-file mirror of [`Args`]. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<Command>,
    pub eps: Option<f64>,
    pub eps_grid: Option<GridValue>,
    pub r: Option<u32>,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub coupled: Option<bool>,
    pub auto: Option<bool>,
    pub lambda: Option<f64>,
    pub tol: Option<f64>,
    pub grid_step: Option<f64>,
    pub edge_trials: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn parse_config(text: &[u8]) -> CliResult<FileConfig> {
    serde_json::from_slice(text).map_err(|e| CliError::validation(format!("config: {e}")))
}

pub fn read_config(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_config(&text)
}

pub const DEFAULT_EDGE_TRIALS: u64 = 100_000;

/// Fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub command: Command,
    pub eps: Option<f64>,
    pub eps_grid: Option<Vec<f64>>,
    pub r: Option<u32>,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub coupled: bool,
    pub auto: bool,
    pub lambda: f64,
    pub tol: f64,
    pub grid_step: Option<f64>,
    pub edge_trials: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentSpec {
    /// Flags override file values, which override defaults.
    pub fn resolve(args: Args, file: FileConfig) -> CliResult<Self> {
        let command = args
            .command
            .or(file.command)
            .ok_or_else(|| CliError::validation("no command given on the command line or in the config"))?;
        let eps_grid = match (args.eps_grid, file.eps_grid) {
            (Some(text), _) | (None, Some(GridValue::Range(text))) => Some(parse_grid(&text)?),
            (None, Some(GridValue::Points(points))) => {
                check_grid(&points)?;
                Some(points)
            }
            (None, None) => None,
        };
        let spec = Self {
            command,
            eps: args.eps.or(file.eps),
            eps_grid,
            r: args.r.or(file.r),
            m: args.m.or(file.m),
            n: args.n.or(file.n),
            trials: args.trials.or(file.trials),
            seed: args.seed.or(file.seed).unwrap_or(0),
            threads: args.threads.or(file.threads),
            coupled: args.coupled || file.coupled.unwrap_or(false),
            auto: args.auto || file.auto.unwrap_or(false),
            lambda: args.lambda.or(file.lambda).unwrap_or(CONNECTIVE_CONSTANT_BOUND),
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            grid_step: args.grid_step.or(file.grid_step),
            edge_trials: args.edge_trials.or(file.edge_trials).unwrap_or(DEFAULT_EDGE_TRIALS),
            out: args.out.or(file.out),
            format: args.format.or(file.format).unwrap_or_default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> CliResult<()> {
        let need = |present: bool, what: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::validation(format!("{} needs {what}", self.command.name())))
            }
        };
        if let Some(e) = self.eps {
            if !(0.0..=1.0).contains(&e) {
                return Err(CliError::validation(format!("eps {e} outside [0, 1]")));
            }
        }
        if self.trials == Some(0) || self.edge_trials == 0 {
            return Err(CliError::validation("trials must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(CliError::validation("threads must be at least 1"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::validation("tol must be positive"));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(CliError::validation("lambda must be positive"));
        }
        match self.command {
            Command::Simulate => {
                need(self.eps.is_some(), "--eps")?;
                need(self.r.is_some(), "--r")?;
                need(self.trials.is_some(), "--trials")
            }
            Command::Sweep => {
                need(self.eps_grid.is_some(), "--eps-grid")?;
                need(self.r.is_some(), "--r")?;
                need(self.trials.is_some(), "--trials")
            }
            Command::Spectral => need(self.eps.is_some_and(|e| e > 0.0), "--eps in (0, 1]"),
            Command::Certify => match (self.eps, self.grid_step) {
                (Some(e), None) => need(e > 0.0, "--eps in (0, 1]"),
                (None, Some(step)) => need(step > 0.0 && step <= 1.0, "--grid-step in (0, 1]"),
                _ => Err(CliError::validation("certify needs exactly one of --eps and --grid-step")),
            },
            Command::PsiVerify => {
                need(self.eps.is_some_and(|e| e > 0.0), "--eps in (0, 1]")?;
                need(self.n.is_some(), "--n")?;
                need(self.trials.is_some(), "--trials")
            }
            Command::Saw => need(self.n.is_some_and(|n| (1..=SAW_MAX_LENGTH).contains(&n)), "--n in 1..=16"),
            Command::ClusterCount => {
                need(self.eps.is_some(), "--eps")?;
                let (m, n, r) = match (self.m, self.n, self.r) {
                    (Some(m), Some(n), Some(r)) => (m, n, r),
                    _ => return need(false, "--m, --n and --r"),
                };
                need(0 < m && m < n && n < r, "0 < m < n < r")
            }
        }
    }
}
