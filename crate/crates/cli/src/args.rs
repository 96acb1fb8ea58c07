use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "spline-gauss", version, about = "Gaussian quadrature for C1 cubic splines on stretched knots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a knot sequence.
    GenKnots {
        #[command(flatten)]
        knots: KnotArgs,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute nodes and weights.
    Rule {
        #[command(flatten)]
        knots: KnotArgs,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run exactness, layout, kernel and error-constant checks; prints a JSON report.
    Verify {
        #[command(flatten)]
        knots: KnotArgs,
        /// Overridden by SPLINE_GAUSS_SEED.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Added to the first weight before checking.
        #[arg(long, allow_negative_numbers = true)]
        perturb: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the Peano kernel as CSV, or sweep the geometric ratio.
    Kernel {
        #[command(flatten)]
        knots: KnotArgs,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
        grid: u64,
        /// `start:end:step` for geometric knots; writes one CSV per ratio.
        #[arg(long, value_name = "START:END:STEP")]
        q_sweep: Option<String>,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct KnotArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Number of internal knots.
    #[arg(long = "N", value_name = "N")]
    pub big_n: Option<usize>,
    /// Number of intervals.
    #[arg(long = "n", value_name = "n")]
    pub n: Option<usize>,
    /// Geometric stretching ratio.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub domain: Option<Vec<f64>>,
    /// Knot file (whitespace/comma separated reals, or JSON); `-` reads stdin.
    #[arg(long)]
    pub knots_file: Option<String>,
    /// Map the knots to [0, 1] first.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Uniform,
    Geometric,
    Chebyshev,
    Legendre,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}
