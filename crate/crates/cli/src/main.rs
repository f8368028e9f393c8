//! `utx`: exterior modified Helmholtz problems on convex polygons via the Unified Transform.

mod checks;
mod config;
mod plot;
mod run;
mod selftest;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use utx_core::contourquad::QuadParams;

use crate::config::RunConfig;
use crate::run::RunError;

#[derive(Parser)]
#[command(name = "utx", version, about = "Exterior modified Helmholtz solver for convex polygons")]
struct Cli {
    /// Worker threads for assembly (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a config file and write artifacts.
    Solve {
        /// Config file (TOML).
        #[arg(conflicts_with = "config_flag", required_unless_present = "config_flag")]
        config: Option<PathBuf>,
        #[arg(long = "config", value_name = "PATH")]
        config_flag: Option<PathBuf>,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle suite on the builtin examples.
    VerifyExamples {
        /// Run a single suite.
        #[arg(long, value_enum)]
        only: Option<verify::Suite>,
    },
    /// Check the quadrature rules and special functions.
    Selftest,
}

fn solve(path: PathBuf, out: Option<PathBuf>) -> ExitCode {
    let run = RunConfig::load(&path).and_then(RunConfig::validate).map(|mut r| {
        if let Some(o) = out {
            r.output = o;
        }
        r
    });
    let result = run.map_err(RunError::Config).and_then(|r| run::execute(&r));
    match result {
        Ok(done) => {
            println!("artifacts written to {}", done.output.display());
            if done.rank_deficient {
                eprintln!("warning: the collocation system is rank deficient");
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::Solve { config, config_flag, out } => {
            solve(config.or(config_flag).expect("clap requires a config path"), out)
        }
        Command::VerifyExamples { only } => {
            let checks = verify::run(only, &QuadParams::from_env());
            if checks::print_table(&checks) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Selftest => {
            if checks::print_table(&selftest::run()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
