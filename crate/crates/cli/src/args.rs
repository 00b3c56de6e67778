use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gentrig::{FunctionKind, Mode, Property};

#[derive(Debug, Parser)]
#[command(name = "gentrig", version, about = "Generalized trigonometric functions and convexity in the parameter p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function at (p, y).
    Eval(PointArgs),
    /// Parameter derivatives of one function at (p, y).
    Derivs(PointArgs),
    /// Certify a convexity or Turán property over a (p, y) grid.
    Scan(ScanArgs),
    /// Turán margin at one point or over a grid.
    Turan(TuranArgs),
    /// Check the auxiliary integral inequality over a (p, s) grid.
    Lemma3(Lemma3Args),
    /// Locate where p -> sin_p(y) stops being concave.
    #[command(name = "find-p0")]
    FindP0(FindP0Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Geometric,
    Linear,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file (atomically) instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub kind: FunctionKind,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub y: f64,
    /// Quadrature and root tolerance (relative).
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PGrid {
    #[arg(long)]
    pub p_min: Option<f64>,
    #[arg(long)]
    pub p_max: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub p_steps: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Geometric)]
    pub p_spacing: Spacing,
}

#[derive(Debug, Args)]
pub struct YGrid {
    #[arg(long)]
    pub y_min: Option<f64>,
    #[arg(long)]
    pub y_max: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub y_steps: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub property: Property,
    #[arg(long)]
    pub kind: FunctionKind,
    #[command(flatten)]
    pub p_grid: PGrid,
    #[command(flatten)]
    pub y_grid: YGrid,
    #[arg(long, default_value = "analytic")]
    pub mode: Mode,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Step in p for the finite-difference mode.
    #[arg(long, default_value_t = 1e-3)]
    pub fd_step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TuranArgs {
    #[arg(long)]
    pub kind: FunctionKind,
    /// Single p (overrides the p grid).
    #[arg(long)]
    pub p: Option<f64>,
    /// Single y (overrides the y grid).
    #[arg(long)]
    pub y: Option<f64>,
    #[command(flatten)]
    pub p_grid: PGrid,
    #[command(flatten)]
    pub y_grid: YGrid,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Lemma3Args {
    #[arg(long, default_value_t = 1.1)]
    pub p_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 10)]
    pub p_steps: usize,
    #[arg(long, default_value_t = 0.05)]
    pub s_min: f64,
    #[arg(long, default_value_t = 0.95)]
    pub s_max: f64,
    #[arg(long, default_value_t = 10)]
    pub s_steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FindP0Args {
    #[arg(long, default_value_t = 0.05)]
    pub y_min: f64,
    #[arg(long, default_value_t = 0.95)]
    pub y_max: f64,
    #[arg(long, default_value_t = 10)]
    pub y_steps: usize,
    #[arg(long, default_value_t = 0.05)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_max: f64,
    /// Bracket width at which bisection stops.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}
