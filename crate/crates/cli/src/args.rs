use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "resp-dde",
    version,
    about = "Stability, Hopf and simulation analysis of the delayed two-state respiratory model"
)]
pub struct Cli {
    /// key=value file with default flag values; flags on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Run sweeps on a single thread
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positive equilibrium (x*, y*)
    Equilibrium(Pair),
    /// Characteristic roots and the largest real part at one delay
    Spectrum(SpectrumArgs),
    /// Crossing frequency and critical delays
    Critical(CriticalArgs),
    /// Delay-independent vs finite-critical-delay dichotomy
    Cooke(Pair),
    /// Critical-curve families or the critical surface
    Chart(ChartArgs),
    /// Integrate the delayed system
    Simulate(SimulateArgs),
    /// Trailing-window extrema versus delay
    Bifurcation(BifurcationArgs),
    /// Normal-form quantities at the first critical delay
    Hopf(Pair),
    /// Largest real part over a parameter cross product
    Table(TableArgs),
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct Outputs {
    /// Write the CSV result here
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write the JSON result here
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Write an SVG plot here
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct Pair {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,
    #[arg(long)]
    pub tau: f64,
    /// Minimum number of roots to report
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct CriticalArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,
    /// Highest branch index n
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartKind {
    Curves,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixed {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ChartArgs {
    #[arg(long, value_enum, default_value_t = ChartKind::Curves)]
    pub kind: ChartKind,
    /// Parameter held fixed for curve families
    #[arg(long, value_enum, default_value_t = Fixed::Beta)]
    pub fix: Fixed,
    /// Value of the fixed parameter
    #[arg(long, default_value_t = 0.8)]
    pub value: f64,
    /// Range of the varying parameter (curves)
    #[arg(long, default_value_t = 0.1)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub to: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, default_value_t = 2)]
    pub n_max: u32,
    /// Surface ranges
    #[arg(long, default_value_t = 0.1)]
    pub alpha_from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha_to: f64,
    #[arg(long, default_value_t = 0.1)]
    pub beta_from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_to: f64,
    /// Surface grid points per axis
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,
    #[arg(long)]
    pub tau: f64,
    #[arg(long, default_value_t = 3000.0)]
    pub tmax: f64,
    /// Target step; the actual step divides tau
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Constant history value of x
    #[arg(long, default_value_t = 35.5)]
    pub x0: f64,
    /// Constant history value of y
    #[arg(long, default_value_t = 26.5)]
    pub y0: f64,
    /// Trailing fraction used for the oscillation summary
    #[arg(long, default_value_t = 0.25)]
    pub window: f64,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct BifurcationArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,
    #[arg(long, default_value_t = 25.0)]
    pub tau_from: f64,
    #[arg(long, default_value_t = 36.0)]
    pub tau_to: f64,
    #[arg(long, default_value_t = 0.25)]
    pub tau_step: f64,
    /// Simulation horizon per delay (default 20000, 5000 with --fast)
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Shorter horizon for quick scans
    #[arg(long)]
    pub fast: bool,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[command(flatten)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct TableArgs {
    /// Comma-separated list or lo:hi:step range
    #[arg(long, default_value = "0.5")]
    pub alphas: String,
    #[arg(long, default_value = "0.8")]
    pub betas: String,
    #[arg(long, default_value = "25:35:1")]
    pub taus: String,
    #[command(flatten)]
    pub outputs: Outputs,
}
