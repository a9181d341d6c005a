//! `kronred` command-line interface.
//!
//! Exit codes: 0 ok, 2 input error, 3 singular reduction, 4 integration
//! failure, 5 I/O error.

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Overrides, ReduceRequest, Run};
use error::{CliError, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "kronred", version, about = "Kron reduction of reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print structural quantities of a network.
    Info {
        #[arg(long)]
        network: PathBuf,
    },
    /// Delete complexes and write a reduction plan.
    Reduce {
        #[arg(long)]
        network: PathBuf,
        /// Complexes to delete by composition, e.g. "X3+X4". Comma separated or repeated.
        #[arg(long, value_delimiter = ',')]
        remove: Vec<String>,
        /// Existing plan to re-evaluate instead of --remove.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Reference state as NAME=value; unspecified species are 1.
        #[arg(long, value_delimiter = ',')]
        init: Vec<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Integrate the full model, and the reduced one when a reduction is given.
    Simulate(RunArgs),
    /// Pulse experiment comparing full and reduced responses.
    Compare(RunArgs),
    /// Rank candidate complex deletions by comparison score.
    Scan(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    remove: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Observed species, comma separated.
    #[arg(long, value_delimiter = ',')]
    observed: Vec<String>,
    /// Initial values as NAME=value.
    #[arg(long, value_delimiter = ',')]
    init: Vec<String>,
}

impl RunArgs {
    fn into_run(self) -> Result<Run, CliError> {
        let overrides = Overrides {
            network: self.network,
            plan: self.plan,
            remove: self.remove,
            out: self.out,
            rtol: self.rtol,
            atol: self.atol,
            t_end: self.t_end,
            seed: self.seed,
            observed: self.observed,
            init: commands::parse_assignments(&self.init)?,
        };
        Run::new(self.manifest.as_deref(), overrides)
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("KRONRED_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("KRONRED_THREADS must be a positive integer, got `{value}`")))?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<String, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Info { network } => commands::info(&network),
        Command::Reduce { network, remove, plan, init, out } => {
            let init = commands::parse_assignments(&init)?;
            commands::reduce(&ReduceRequest { network, remove, plan, init, out })
        }
        Command::Simulate(args) => commands::simulate(&args.into_run()?),
        Command::Compare(args) => commands::compare_cmd(&args.into_run()?),
        Command::Scan(args) => commands::scan(&args.into_run()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
