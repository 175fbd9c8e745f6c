mod analyze;
mod check;
mod config;
mod error;
mod output;
mod propagate;
mod schema;
mod transform;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use config::{Method, Overrides, Settings};
use error::CliError;
use transform::Transform;

/// Siegel-Jacobi domain toolkit: validate inputs, change charts, propagate
/// linear-Hamiltonian flows and analyze them.
#[derive(Debug, Parser)]
#[command(name = "sjd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for generated fixtures.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Tolerance for membership and hermiticity checks.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    method: Option<Method>,
    /// Output file (report, point or trajectory CSV depending on the command).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Increase log verbosity on stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check matrices, points and Hamiltonians; exit 2 if any check fails.
    Check {
        files: Vec<PathBuf>,
        /// Rank of the seeded fixtures when no files are given.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Map a point document through a chart transform.
    Transform {
        #[arg(value_enum)]
        transform: Transform,
        point: PathBuf,
    },
    /// Integrate the flow and write a CSV trajectory.
    Propagate,
    /// Floquet, energy, critical points, kernel/metric and phase report.
    Analyze,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = Overrides { seed: cli.seed, tol: cli.tol, method: cli.method, out: cli.out.clone() };
    match cli.command {
        Command::Check { files, n } => {
            let tol = cli.tol.unwrap_or(siegel_jacobi::linalg::DEFAULT_TOL);
            if !(tol > 0.0) {
                return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
            }
            check::run(&files, cli.seed, n, tol, cli.out.as_deref())
        }
        Command::Transform { transform, point } => transform::run(transform, &point, cli.out.as_deref()),
        Command::Propagate => propagate::run(&Settings::load(cli.config.as_deref(), &flags)?),
        Command::Analyze => analyze::run(&Settings::load(cli.config.as_deref(), &flags)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
