use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctm_entropy::character::{DEFAULT_KAPPA_CAP, DEFAULT_SPECTRUM_ORDER};
use ctm_entropy::{Method, XiMode};

/// Entanglement entropy of integrable vertex models from corner transfer
/// matrices.
#[derive(Debug, Parser)]
#[command(name = "ctm-entropy", version)]
pub struct Cli {
    #[command(flatten)]
    pub numerics: NumericArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    /// Absolute tolerance used to truncate infinite series and products.
    #[arg(long, global = true, env = "CTM_ABS_TOL", default_value_t = 1e-13)]
    pub abs_tol: f64,

    /// Hard limit on the number of terms in any single series.
    #[arg(
        long,
        global = true,
        env = "CTM_MAX_TERMS",
        default_value_t = 10_000_000
    )]
    pub max_terms: usize,

    /// Largest kappa accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_KAPPA_CAP)]
    pub max_kappa: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the entropy at a single point.
    Entropy(EntropyArgs),
    /// Evaluate the entropy over a geometric grid of eps values.
    Sweep(SweepArgs),
    /// Fit the scaling form to a sweep file or to an inline sweep.
    Fit(FitArgs),
    /// Print the CTM level degeneracies, and level probabilities if eps is given.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Direct,
    Poisson,
    Spectrum,
    Asymptotic,
    /// Poisson below eps = 0.5, direct otherwise.
    Auto,
}

impl MethodChoice {
    /// The method this choice names, or `None` for `auto`.
    pub fn fixed(self) -> Option<Method> {
        match self {
            MethodChoice::Direct => Some(Method::Direct),
            MethodChoice::Poisson => Some(Method::Poisson),
            MethodChoice::Spectrum => Some(Method::Spectrum),
            MethodChoice::Asymptotic => Some(Method::Asymptotic),
            MethodChoice::Auto => None,
        }
    }

    pub fn resolve(self, epsilon: f64) -> Method {
        self.fixed().unwrap_or_else(|| Method::auto_for(epsilon))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum XiChoice {
    Exact,
    Asymptotic,
}

impl From<XiChoice> for XiMode {
    fn from(choice: XiChoice) -> Self {
        match choice {
            XiChoice::Exact => XiMode::Exact,
            XiChoice::Asymptotic => XiMode::Asymptotic,
        }
    }
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub kappa: u32,

    /// Boundary label, 0..=kappa.
    #[arg(long)]
    pub i: u32,

    /// Deviation from criticality, eps > 0 with x = exp(-eps).
    #[arg(long)]
    pub eps: f64,

    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub kappa: u32,

    /// Boundary labels, comma separated; all of 0..=kappa when omitted.
    #[arg(long, value_delimiter = ',')]
    pub i: Vec<u32>,

    #[arg(long)]
    pub eps_start: f64,

    #[arg(long)]
    pub eps_stop: f64,

    /// Number of grid points.
    #[arg(long, default_value_t = 8)]
    pub count: usize,

    /// Methods to evaluate at every point, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "auto")]
    pub methods: Vec<MethodChoice>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Worker threads; 0 uses one per available core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV to fit. Without it the sweep is evaluated from the inline flags.
    #[arg(long, conflicts_with_all = ["kappa", "i", "eps_start", "eps_stop"])]
    pub input: Option<PathBuf>,

    #[arg(long)]
    pub kappa: Option<u32>,

    #[arg(long, value_delimiter = ',')]
    pub i: Vec<u32>,

    #[arg(long)]
    pub eps_start: Option<f64>,

    #[arg(long)]
    pub eps_stop: Option<f64>,

    #[arg(long, default_value_t = 8)]
    pub count: usize,

    /// Only use rows computed with this method (inline sweeps: evaluate with it).
    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,

    /// Correlation length used for the C_kappa estimate.
    #[arg(long, value_enum, default_value_t = XiChoice::Exact)]
    pub xi: XiChoice,

    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub format: ReportFormat,

    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub kappa: u32,

    #[arg(long)]
    pub i: u32,

    /// Highest level n (in steps of x^2).
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_ORDER)]
    pub order: usize,

    /// Also print level probabilities at this eps.
    #[arg(long)]
    pub eps: Option<f64>,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}
