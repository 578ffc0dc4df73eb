// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coupled_emitters_cli::{parse_config, presets, run, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "coupled-emitters", version, about = "Spectra and photon statistics of two coupled emitters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file or a built-in preset and write CSV.
    Run {
        #[arg(required_unless_present = "preset", conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Output directory, created if missing.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads for grid sweeps (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// List the built-in presets.
    Presets,
    /// Parse and validate a configuration without running it.
    Validate { config: PathBuf },
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn set_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
            preset,
        } => {
            set_threads(threads)?;
            let cfg = match (config, preset) {
                (Some(path), _) => load(&path)?,
                (None, Some(name)) => presets::find(&name)?.config()?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            for path in run(&cfg, &out)? {
                println!("{}", path.display());
            }
        }
        Command::Presets => {
            for p in presets::PRESETS {
                println!("{:<12} {}", p.name, p.summary());
            }
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!("{}: valid {} configuration", config.display(), cfg.scenario.name());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
