use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use monotone_bandits_cli::commands::{self, Overrides, DEFAULT_VERIFY_RESOLUTION};
use monotone_bandits_cli::{CliError, CliResult, ExperimentConfig};

/// Threshold identification experiments on monotone Bernoulli bandits.
#[derive(Debug, Parser)]
#[command(name = "mtb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Source {
    /// JSON experiment config.
    config: Option<PathBuf>,

    /// Built-in config: figure1a, figure1b, figure1c or figure1d.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
}

impl Source {
    fn load(&self) -> CliResult<ExperimentConfig> {
        match (&self.config, &self.preset) {
            (Some(path), None) => ExperimentConfig::from_file(path),
            (None, Some(name)) => ExperimentConfig::from_preset(name),
            _ => Err(CliError::config("give a config file or --preset")),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the Monte-Carlo experiment and write CSV, manifest and SVG.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path prefix.
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the asymptotic regret lower-bound constant.
    Bound {
        #[command(flatten)]
        source: Source,
        /// Cross-check against the numerical program (at most 6 arms).
        #[arg(long)]
        verify: bool,
        /// Grid resolution for --verify.
        #[arg(long, default_value_t = DEFAULT_VERIFY_RESOLUTION)]
        resolution: usize,
    },
    /// Print the optimal arm for the configured objective.
    Oracle {
        #[command(flatten)]
        source: Source,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Simulate { source, trials, horizon, seed, out, workers } => {
            let mut config = source.load()?;
            Overrides { trials, horizon, seed, out, workers }.apply(&mut config);
            commands::simulate(&config).map(|(_, _, summary)| summary)
        }
        Command::Bound { source, verify, resolution } => commands::bound(&source.load()?, verify.then_some(resolution)),
        Command::Oracle { source } => commands::oracle(&source.load()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
