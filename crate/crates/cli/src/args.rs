use std::path::PathBuf;

use bayescfar::DetectorFamily;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "bayescfar",
    version,
    about = "Bayesian CFAR thresholds, predictive curves, Monte Carlo runs and profile scans"
)]
pub struct Cli {
    /// TOML run configuration. Flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold on the cell under test for an observed clutter statistic (JSON).
    Threshold(ThresholdArgs),
    /// Exceedance probability of the predictive over a threshold grid (CSV).
    Pfa(PfaArgs),
    /// Predictive density over a grid of cell values (CSV).
    Density(DensityArgs),
    /// Monte Carlo false alarm or detection probability (JSON).
    Simulate(SimulateArgs),
    /// False alarm estimates across exponential clutter rates (CSV).
    Sweep(SweepArgs),
    /// Slide a detector along a range profile read from a CSV file.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClutterKind {
    Exponential,
    Pareto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Pfa,
    Pd,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Pfa => "pfa",
            Mode::Pd => "pd",
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectorArgs {
    /// bayes_os, min_cfar or ca_cfar.
    #[arg(long)]
    pub family: Option<DetectorFamily>,
    /// Number of reference cells.
    #[arg(long)]
    pub n: Option<usize>,
    /// Order statistic index, bayes_os only.
    #[arg(long)]
    pub k: Option<usize>,
    /// Design false alarm probability.
    #[arg(long)]
    pub pfa: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub detector: DetectorArgs,
    /// Observed clutter statistic: the k-th smallest cell for the order
    /// statistic families, the window sum for ca_cfar.
    #[arg(long)]
    pub t: Option<f64>,
}

/// Predictive distribution selection for `pfa` and `density`.
#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub family: Option<DetectorFamily>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Observed clutter statistic.
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PfaArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// start:stop:steps
    #[arg(long, value_name = "GRID")]
    pub tau_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// start:stop:steps
    #[arg(long, value_name = "GRID")]
    pub z0_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Number of Monte Carlo trials.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClutterArgs {
    #[arg(long)]
    pub clutter: Option<ClutterKind>,
    /// Exponential clutter rate.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Pareto shape.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Pareto scale.
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[command(flatten)]
    pub detector: DetectorArgs,
    #[command(flatten)]
    pub clutter: ClutterArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Swerling I signal-to-clutter ratio (linear), required with --mode pd.
    #[arg(long)]
    pub snr: Option<f64>,
    /// Append a CSV row to this file, writing the header if the file is new.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub detector: DetectorArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated exponential clutter rates.
    #[arg(long, value_name = "LIST")]
    pub lambda_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub detector: DetectorArgs,
    /// Single-column CSV of nonnegative cell powers.
    #[arg(long, value_name = "FILE")]
    pub profile: Option<PathBuf>,
    /// Reference cells before the cell under test.
    #[arg(long)]
    pub leading: Option<usize>,
    /// Reference cells after the cell under test.
    #[arg(long)]
    pub trailing: Option<usize>,
    /// Skip the first line of the profile.
    #[arg(long)]
    pub header: bool,
}
