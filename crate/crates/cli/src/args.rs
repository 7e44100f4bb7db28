use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "conc", version, about = "Spectra of time-frequency concentration operators")]
pub struct Cli {
    /// Worker threads (defaults to the available parallelism)
    #[arg(long, global = true, env = "CONC_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of a concentration operator, largest first
    Spectrum(SpectrumArgs),
    /// Measured spectral statistics next to their predicted and exact values
    Report(ReportArgs),
    /// Reproducing kernel and its transform along a line
    #[command(allow_negative_numbers = true)]
    Kernel(KernelArgs),
    /// Inner-product Gram matrix of the leading basis functions
    Gram(GramArgs),
    /// Norms of the basis images in the Fock spaces
    BargmannCheck(BargmannArgs),
    /// Run a named verification suite (gram, kernels, bargmann, oracle, pw)
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// one-sided, freq-sided, two-sided or pw
    #[arg(long)]
    pub mode: String,

    /// Half-width of the time interval
    #[arg(long = "R")]
    pub r: Option<f64>,

    /// Half-width of the frequency band
    #[arg(long = "T")]
    pub t: Option<f64>,

    /// Basis size for Galerkin modes, node count for pw
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the assembled matrix in the binary dump format
    #[arg(long)]
    pub dump_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,

    /// Threshold for the counting statistics, in (0, 0.5)
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,

    /// Sweep over these interval half-widths and emit an array
    #[arg(long = "R-list", value_delimiter = ',', conflicts_with = "r")]
    pub r_list: Option<Vec<f64>>,

    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, conflicts_with = "r_list")]
    pub dump_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// First argument of the kernel
    #[arg(long)]
    pub x: f64,

    /// Single second argument; omit to sample a range
    #[arg(long, conflicts_with_all = ["y_min", "y_max"])]
    pub y: Option<f64>,

    #[arg(long, default_value_t = -4.0)]
    pub y_min: f64,

    #[arg(long, default_value_t = 4.0)]
    pub y_max: f64,

    #[arg(long, default_value_t = 161)]
    pub points: usize,

    /// Add the weighted Paley-Wiener kernel with this band
    #[arg(long = "T")]
    pub t: Option<f64>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    /// Number of basis functions
    #[arg(long, default_value_t = 48)]
    pub dim: usize,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BargmannArgs {
    /// Highest degree to check (at most 12)
    #[arg(long, default_value_t = 6)]
    pub dim: usize,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: String,
}
