use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use holevo_cli::commands::{self, SimulateArgs};
use holevo_cli::CliError;

#[derive(Parser)]
#[command(
    name = "holevo",
    version,
    about = "System-apparatus measurement models and Holevo-bound checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario and report χ, measured and accessible information.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit a flat CSV row instead of JSON.
        #[arg(long)]
        csv: bool,
        /// Override the scenario's validation tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check I ≤ χ on random ensembles and POVMs.
    VerifyBound {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Look for Von Neumann families whose conditional states do not commute.
    SearchCounterexample {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Simulate {
            scenario,
            out,
            csv,
            tol,
        } => {
            let args = SimulateArgs {
                scenario,
                out,
                csv,
                tol,
            };
            commands::simulate(&args, &mut stdout).map(drop)
        }
        Command::VerifyBound { dim, trials, seed } => {
            commands::verify_bound(dim, trials, seed, &mut stdout).map(drop)
        }
        Command::SearchCounterexample {
            dim,
            trials,
            seed,
            dump_dir,
        } => commands::search_counterexample(dim, trials, seed, dump_dir.as_deref(), &mut stdout)
            .map(drop),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HOLEVO_LOG", "off")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
