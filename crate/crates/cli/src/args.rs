use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::EXIT_CODE_HELP;

#[derive(Debug, Parser)]
#[command(
    name = "bifree-cli",
    version,
    about = "Free, Boolean, c-free and bi-free additive convolutions of measures",
    after_help = EXIT_CODE_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free convolution of two measures on the line: atoms, transform values
    /// and the density of the continuous part.
    FreeConv(Run),
    /// Bi-free convolution of two planar measures: atoms with diagnostics,
    /// transform values and an experimental smoothed density.
    BifreeConv(Run),
    /// Boolean convolution of two measures on the line.
    BooleanConv(Run),
    /// Bi-Boolean convolution of two planar measures.
    BiBooleanConv(Run),
    /// Conditionally free convolution of two pair files {"phi":…,"psi":…}.
    CfreeConv(Run),
    /// Conditionally bi-free convolution of two planar pair files.
    CbifreeConv(Run),
    /// Partial bi-free convolution semigroup of one planar measure.
    Semigroup(Run),
    /// Atoms of one measure, of its evolution to time --t, or of the
    /// (bi-)free convolution of two measures.
    Atoms(Run),
    /// Moments (mixed moments for planar input) of one measure, of its
    /// evolution to time --t, or of the (bi-)free convolution of two.
    Moments(Run),
    /// Density grid as CSV for the free convolution or semigroup evolution.
    Density(Run),
}

#[derive(Debug, Args)]
pub struct Run {
    /// Input measure files.
    #[arg(required = true, num_args = 1..=2)]
    pub inputs: Vec<PathBuf>,

    /// Relative residual at which the fixed-point solver stops.
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,

    /// Iteration cap of the fixed-point solver.
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,

    /// Moment order [default: 16 on the line, 8 in the plane].
    #[arg(long)]
    pub order: Option<usize>,

    /// Distance from the real axis for Stieltjes inversion
    /// [default: 1e-6 on the line, 1e-2 in the plane].
    #[arg(long)]
    pub eps: Option<f64>,

    /// Second smoothing width for planar densities.
    #[arg(long, default_value_t = 1e-2)]
    pub delta: f64,

    /// Grid as x0:x1:n or x0:x1:n,y0:y1:m.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Semigroup time, at least 1.
    #[arg(long)]
    pub t: Option<f64>,

    /// Semigroup times as t0:t1:n.
    #[arg(long, conflicts_with = "t")]
    pub t_range: Option<String>,

    /// Evaluation point, re,im on the line or re,im;re,im in the plane.
    /// Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Vec<String>,

    /// Output file for the main result [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output file for the density grid of the convolution commands.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Allow planar evaluations with arguments in opposite half-planes,
    /// which the smoothed planar densities need.
    #[arg(long)]
    pub experimental_2d_density: bool,

    /// Rescale inputs of total mass other than one instead of rejecting them.
    #[arg(long)]
    pub renormalize: bool,
}
