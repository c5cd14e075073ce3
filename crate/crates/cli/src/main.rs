//! `rom` — reduced-order modeling pipeline.
//!
//! Exit codes: 0 on success, 2 on usage or input-validation errors,
//! 3 on numeric failures.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "rom",
    version,
    about = "Reduced-order models: generate data, build bases and surrogates, evaluate, validate, benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate damped-pendulum training data (training + params + grid files)
    GenPendulum(GenPendulumArgs),
    /// Build a reduced basis from a training matrix
    BuildRb(BuildRbArgs),
    /// Build a surrogate model and save it as a JSON model file
    BuildSurrogate(BuildSurrogateArgs),
    /// Evaluate a saved model at a parameter value
    Eval(EvalArgs),
    /// Compare a saved model against a test set
    Validate(ValidateArgs),
    /// Time greedy builds on random training sets
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenPendulumArgs {
    /// Damping coefficient
    #[arg(long, default_value_t = 0.2)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda_min: f64,
    #[arg(long, default_value_t = 5.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 101)]
    lambda_count: usize,
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    #[arg(long, default_value_t = 50.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1001)]
    t_count: usize,
    /// Initial angle (radians)
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    theta0: f64,
    /// Initial angular velocity
    #[arg(long, default_value_t = 0.0)]
    omega0: f64,
    /// RK4 substeps per output interval
    #[arg(long, default_value_t = 10)]
    substeps: usize,
    /// Output directory (receives training.csv, params.csv, grid.csv)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BuildRbArgs {
    /// Training matrix file
    #[arg(long)]
    training: PathBuf,
    /// Physical grid file (single row or column)
    #[arg(long)]
    grid: PathBuf,
    /// Parameter points file; row indices are used when omitted
    #[arg(long)]
    params: Option<PathBuf>,
    /// Quadrature rule: riemann, trapezoidal or euclidean
    #[arg(long, default_value = "riemann")]
    rule: String,
    #[arg(long, default_value_t = 1e-12)]
    greedy_tol: f64,
    /// Run the greedy loop on normalized training rows
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    normalize: bool,
    /// Output basis matrix file
    #[arg(long)]
    out: PathBuf,
    /// Optional (iteration, error) table with the greedy history
    #[arg(long)]
    errors_out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildSurrogateArgs {
    #[arg(long)]
    training: PathBuf,
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    grid: PathBuf,
    /// Quadrature rule: riemann, trapezoidal or euclidean
    #[arg(long, default_value = "riemann")]
    rule: String,
    #[arg(long, default_value_t = 1e-12)]
    greedy_tol: f64,
    /// Spline degree for the parameter-space fits (1, 3 or 5)
    #[arg(long, default_value_t = 3)]
    poly_deg: usize,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    normalize: bool,
    /// Output model file (JSON)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// Parameter value to evaluate at
    #[arg(long)]
    lambda: f64,
    /// Write the grid values to a matrix file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    test_training: PathBuf,
    #[arg(long)]
    test_params: PathBuf,
    /// Output (lambda, relative L2 error) table
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated training sizes, e.g. 11x11,101x101
    #[arg(long, default_value = "11x11,101x101")]
    sizes: String,
    /// Comma-separated rules
    #[arg(long, default_value = "riemann")]
    rules: String,
    /// Comma-separated greedy tolerances
    #[arg(long, default_value = "1e-12")]
    tols: String,
    /// Comma-separated normalize options
    #[arg(long, default_value = "false")]
    normalize: String,
    #[arg(long, default_value_t = 1)]
    reps: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit and print the log-log scaling exponent over square sizes
    #[arg(long, default_value_t = false)]
    fit_exponent: bool,
    /// Run cells on worker threads (wall times become comparative only)
    #[arg(long, default_value_t = false)]
    parallel: bool,
}

fn failure_exit_code(e: &rom_core::Error) -> u8 {
    use rom_core::Error::*;
    match e {
        // Usage and input-validation problems.
        InvalidGrid(_)
        | Dimension { .. }
        | InvalidData(_)
        | NonOrthonormalBasis { .. }
        | InsufficientData(_)
        | InvalidAbscissa(_)
        | OutOfDomain { .. }
        | Unsupported(_)
        | Io(_)
        | Parse(_) => 2,
        // Numeric failures.
        ZeroNorm
        | LinearDependence { .. }
        | DependentRow { .. }
        | DegenerateBasis(_)
        | IntegrationFailure(_)
        | SingularMatrix => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(failure_exit_code(&e))
        }
    }
}
