use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "circle-dda",
    version,
    about = "DDA circle interpolators: generate, analyze, sweep, bench, plot"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a trajectory and write it as CSV, JSON, or SVG
    Generate(GenerateArgs),
    /// Report matrix entries, spiral quantities, eigenvalues, and orbit class
    Analyze(AnalyzeArgs),
    /// Accuracy metrics across schemes and step sizes, as CSV
    Sweep(SweepArgs),
    /// Per-step operation counts and throughput
    Bench(BenchArgs),
    /// Render a trajectory (generated inline or read from CSV) as SVG
    Plot(PlotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Float,
    Fixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Scheme name, e.g. first-order, matsushiro, best-third-order,
    /// magic-circle, exact-rotation, implicit-midpoint, explicit-midpoint
    #[arg(long)]
    pub scheme: String,
    /// Step size: a decimal or a dyadic `2^-m`
    #[arg(long)]
    pub h: String,
    /// Two-step parameterization: identity, exact-sin, taylor3, shift-series:N
    /// (default identity; the patented half-step variant of matsushiro is
    /// obtained by passing h/2)
    #[arg(long)]
    pub delta: Option<String>,
    /// Radius: a decimal or `2^N`
    #[arg(long, default_value = "1")]
    pub r: String,
    /// Number of recurrence steps
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Engine::Float)]
    pub engine: Engine,
    /// Sub-LSB guard bits of the fixed engine (default 2m+6)
    #[arg(long)]
    pub frac_bits: Option<u32>,
    /// Initialization series terms kept by the fixed engine
    #[arg(long, default_value_t = 8)]
    pub series_terms: u32,
    #[arg(long, value_enum, default_value_t = GenFormat::Csv)]
    pub format: GenFormat,
    /// Output path (stdout when omitted); DDA_OUTPUT_DIR prefixes relative paths
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub scheme: String,
    #[arg(long)]
    pub h: String,
    /// Two-step parameterization (explicit-midpoint only)
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Comma-separated scheme names (may be empty for a header-only CSV)
    #[arg(long, default_value = "")]
    pub schemes: String,
    /// Comma-separated step sizes, decimals or `2^-m`
    #[arg(long)]
    pub h_list: String,
    /// Two-step parameterization for explicit-midpoint cells
    #[arg(long, default_value = "identity")]
    pub delta: String,
    /// Steps per cell (default: about two revolutions)
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub scheme: String,
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long, value_enum, default_value_t = Engine::Float)]
    pub engine: Engine,
    /// Radius for the fixed engine: must be `2^N`
    #[arg(long, default_value = "2^8")]
    pub r: String,
    #[arg(long)]
    pub frac_bits: Option<u32>,
    #[arg(long, default_value_t = 8)]
    pub series_terms: u32,
    /// Steps to execute for the throughput measurement
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct PlotArgs {
    /// CSV file produced by `generate --format csv`
    #[arg(long, conflicts_with_all = ["scheme", "h", "delta", "r", "steps"])]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    pub scheme: Option<String>,
    #[arg(long, required_unless_present = "input")]
    pub h: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long, default_value = "1")]
    pub r: String,
    #[arg(long, required_unless_present = "input")]
    pub steps: Option<usize>,
    /// Pixel size of the square SVG canvas
    #[arg(long, default_value_t = 512)]
    pub size: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
