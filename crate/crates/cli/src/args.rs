//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use maxwell_kinetics::kinetics::DEFAULT_COLLISION_TIME;
use maxwell_kinetics::TailModel;

/// Default SI temperature, kelvin.
pub const DEFAULT_TEMPERATURE_K: f64 = 310.0;
/// Default SI molecular mass when no mass flag is given: O₂.
pub const DEFAULT_MASS_AMU: f64 = 32.0;

#[derive(Debug, Parser)]
#[command(name = "mbk", version, about = "Maxwell-Boltzmann kinetics: distributions, activation tails, random walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the speed density and CDF on a uniform grid.
    Pdf(PdfArgs),
    /// Change in the activation tail between two temperatures.
    Fever(FeverArgs),
    /// Draw a seeded batch of velocity vectors.
    Sample(SampleArgs),
    /// Tail fraction and reaction time for one activation energy.
    Tail(TailArgs),
    /// Simulate lattice random walks.
    Walk(WalkArgs),
    /// Run the built-in oracle checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Exact,
    Exponential,
}

impl From<Model> for TailModel {
    fn from(m: Model) -> Self {
        match m {
            Model::Exact => TailModel::Exact,
            Model::Exponential => TailModel::Exponential,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Leave the generation time out of the metadata.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("mass_flag").args(["mass_amu", "mass_kg", "mass"]).multiple(false)))]
pub struct ThermalArgs {
    /// Temperature: kelvin, or reduced units with --reduced [default: 310 K, reduced 1]
    #[arg(short = 'T', long)]
    pub temperature: Option<f64>,
    /// Molecular mass in atomic mass units [default: 32]
    #[arg(long, conflicts_with = "reduced")]
    pub mass_amu: Option<f64>,
    /// Molecular mass in kilograms.
    #[arg(long, conflicts_with = "reduced")]
    pub mass_kg: Option<f64>,
    /// Dimensionless units with k = 1.
    #[arg(long)]
    pub reduced: bool,
    /// Mass in reduced units [default: 1]
    #[arg(short = 'm', long, requires = "reduced")]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Clone, Args)]
pub struct PdfArgs {
    #[command(flatten)]
    pub thermal: ThermalArgs,
    /// Largest tabulated speed [default: 4 times the most probable speed]
    #[arg(long)]
    pub max_speed: Option<f64>,
    /// Number of grid points, including 0 and the maximum.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FeverArgs {
    /// Baseline temperature, kelvin.
    #[arg(long, default_value_t = 310.0)]
    pub t_base: f64,
    /// New temperature, kelvin.
    #[arg(long, default_value_t = 311.0)]
    pub t_new: f64,
    /// Fraction of molecules above the activation energy at the baseline.
    #[arg(long, default_value_t = 1e-12)]
    pub baseline_fraction: f64,
    #[arg(long, value_enum, default_value = "exponential")]
    pub model: Model,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Number of velocity vectors.
    #[arg(short = 'n', long, default_value_t = 1000)]
    pub count: usize,
    /// Distribution parameter c directly, instead of temperature and mass.
    #[arg(short = 'c', long = "c", conflicts_with_all = ["temperature", "mass_amu", "mass_kg", "mass", "reduced"])]
    pub c: Option<f64>,
    #[command(flatten)]
    pub thermal: ThermalArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("activation").args(["lambda", "ea"]).required(true)))]
pub struct TailArgs {
    /// Reduced activation energy E_a/(kT).
    #[arg(long, conflicts_with_all = ["temperature", "reduced"])]
    pub lambda: Option<f64>,
    /// Activation energy: joules, or reduced units with --reduced.
    #[arg(long)]
    pub ea: Option<f64>,
    /// Temperature for --ea: kelvin, or reduced units with --reduced [default: 310 K, reduced 1]
    #[arg(short = 'T', long)]
    pub temperature: Option<f64>,
    /// Dimensionless units with k = 1.
    #[arg(long)]
    pub reduced: bool,
    #[arg(long, value_enum, default_value = "exact")]
    pub model: Model,
    /// Mean time between collisions, seconds.
    #[arg(long, default_value_t = DEFAULT_COLLISION_TIME)]
    pub collision_time: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[arg(long, default_value_t = 100)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1.0)]
    pub step_length: f64,
    /// Time per step; adds the diffusion coefficient and length to the report.
    #[arg(long)]
    pub step_time: Option<f64>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub tol_gauss: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_normalization: f64,
    /// Relative tolerance of the closed-form mean energy against 3kT/2.
    #[arg(long, default_value_t = 1e-12)]
    pub tol_mean_energy: f64,
    /// Relative tolerance of the quadrature mean energy against 3kT/2.
    #[arg(long, default_value_t = 1e-9)]
    pub tol_mean_energy_quadrature: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol_separability: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol_isotropy: f64,
    /// Randomized cases for the separability and isotropy checks.
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    /// Sample size of the Kolmogorov-Smirnov check.
    #[arg(long, default_value_t = 10_000)]
    pub ks_samples: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
