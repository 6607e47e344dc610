//! Command-line front end for the experiment drivers.

use clap::{Parser, Subcommand};
use raa::experiment::{list_experiments, run_experiment, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable holding the default worker thread count.
const THREADS_ENV: &str = "RAA_THREADS";

#[derive(Parser)]
#[command(name = "raa-sim", version, about = "Ray antenna array Monte-Carlo experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its result table.
    Run {
        config: PathBuf,
        /// Overrides the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: $RAA_THREADS, else all cores).
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
        /// Output path; overrides `output` in the configuration. Without
        /// either, the table goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a configuration and print it with defaults filled in.
    Validate { config: PathBuf },
    /// List the available experiments.
    ListExperiments,
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn real_main(cli: Cli) -> raa::Result<()> {
    match cli.command {
        Command::ListExperiments => {
            for (name, desc) in list_experiments() {
                println!("{name:<20} {desc}");
            }
        }
        Command::Validate { config } => {
            let v = ExperimentConfig::from_file(&config)?;
            for line in &v.provenance {
                eprintln!("{line}");
            }
            for w in &v.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", v.config);
        }
        Command::Run {
            config,
            seed,
            threads,
            out,
        } => {
            let v = ExperimentConfig::from_file(&config)?;
            for line in &v.provenance {
                eprintln!("{line}");
            }
            for w in &v.warnings {
                eprintln!("warning: {w}");
            }
            let mut cfg = v.config;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let table = run_experiment(&cfg, threads)?;
            match out.or(cfg.output.clone()) {
                Some(path) => table.write_atomic(&path)?,
                None => print!("{}", table.to_csv()),
            }
        }
    }
    Ok(())
}
