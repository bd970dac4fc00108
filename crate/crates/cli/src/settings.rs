//! Flag, config-file and preset resolution. Precedence: flag, then the
//! `--config` file, then the preset, then the defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use mtula::potentials::TargetKind;

pub const DEFAULT_BETA: f64 = 1.0;
pub const DEFAULT_DIM: usize = 100;
pub const DEFAULT_CHAINS: usize = 250;
pub const DEFAULT_HORIZON: f64 = 400.0;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_LAMBDAS: [f64; 6] = [0.001, 0.005, 0.01, 0.025, 0.05, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// d = 20, 500 chains.
    Desk,
}

impl Preset {
    fn dim(self) -> usize {
        match self {
            Preset::Desk => 20,
        }
    }

    fn chains(self) -> usize {
        match self {
            Preset::Desk => 500,
        }
    }
}

/// Flags every subcommand accepts.
#[derive(Debug, Clone, Default, Args)]
pub struct SharedArgs {
    /// gaussian, mixture or double-well.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Step size λ.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Inverse temperature β.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Number of independent chains.
    #[arg(long)]
    pub chains: Option<usize>,
    /// Simulated time λn.
    #[arg(long, allow_negative_numbers = true)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Primary output file; companions are written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Overwrite existing outputs.
    #[arg(long)]
    pub force: bool,
    /// JSON file of defaults; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// The `--config` file. Keys are the long flag names in snake_case.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub target: Option<String>,
    pub dim: Option<usize>,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub chains: Option<usize>,
    pub horizon: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub preset: Option<Preset>,
    pub workers: Option<usize>,
    pub algorithm: Option<String>,
    pub exact: Option<bool>,
    pub input: Option<PathBuf>,
    pub bins: Option<usize>,
    pub range: Option<(f64, f64)>,
    pub lambdas: Option<Vec<f64>>,
    pub metric: Option<String>,
    pub projection: Option<String>,
    pub projections: Option<usize>,
    pub fine_step: Option<f64>,
    pub reference_horizon: Option<f64>,
    pub analytic: Option<bool>,
    pub bootstrap: Option<usize>,
    pub degrees: Option<Vec<u32>>,
    pub points: Option<usize>,
    pub radius: Option<f64>,
    #[serde(rename = "override")]
    pub overrides: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Shared parameters after defaults are applied.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub target: Option<TargetKind>,
    pub dim: usize,
    pub lambda: Option<f64>,
    pub beta: f64,
    pub chains: usize,
    pub horizon: f64,
    pub seed: u64,
    pub preset: Option<Preset>,
    pub workers: Option<usize>,
    pub force: bool,
}

impl Resolved {
    pub fn target(&self) -> Result<TargetKind> {
        self.target
            .context("--target is required (gaussian, mixture or double-well)")
    }

    pub fn lambda(&self) -> Result<f64> {
        self.lambda.context("--lambda is required")
    }
}

/// Resolves the shared flags and returns the config file for the
/// command-specific ones.
pub fn resolve(shared: &SharedArgs) -> Result<(Resolved, FileConfig)> {
    let file = match &shared.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let preset = shared.preset.or(file.preset);
    let target = match shared.target.as_deref().or(file.target.as_deref()) {
        Some(name) => Some(name.parse::<TargetKind>()?),
        None => None,
    };
    let resolved = Resolved {
        target,
        dim: shared
            .dim
            .or(file.dim)
            .or(preset.map(Preset::dim))
            .unwrap_or(DEFAULT_DIM),
        lambda: shared.lambda.or(file.lambda),
        beta: shared.beta.or(file.beta).unwrap_or(DEFAULT_BETA),
        chains: shared
            .chains
            .or(file.chains)
            .or(preset.map(Preset::chains))
            .unwrap_or(DEFAULT_CHAINS),
        horizon: shared.horizon.or(file.horizon).unwrap_or(DEFAULT_HORIZON),
        seed: shared.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        preset,
        workers: shared.workers.or(file.workers),
        force: shared.force,
    };
    if resolved.dim == 0 {
        bail!("--dim must be at least 1");
    }
    if !(resolved.beta > 0.0 && resolved.beta.is_finite()) {
        bail!("--beta must be positive and finite, got {}", resolved.beta);
    }
    if resolved.workers == Some(0) {
        bail!("--workers must be at least 1");
    }
    Ok((resolved, file))
}

/// `--out`, else the config file's `out`, else `default`.
pub fn out_path(shared: &SharedArgs, file: &FileConfig, default: &str) -> PathBuf {
    shared
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from(default))
}
