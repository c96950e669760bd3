use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use squeezed_np_cli::{run, Command, OutputFormat, Overrides, RunSpec};

/// Detection tables for squeezed Gaussian channels.
#[derive(Debug, Parser)]
#[command(name = "squeezed-np", version)]
struct Cli {
    /// What to compute; may instead come from the config file.
    #[arg(value_enum)]
    command: Option<Command>,

    /// Total energy E_T (grid for mutual-info, mixed-gain, optimize).
    #[arg(long)]
    energy: Option<String>,
    /// Squeezing fraction: a number, a grid, or "opt".
    #[arg(long)]
    gamma: Option<String>,
    /// Mixing spread: a number, a grid, "weak" or "strong".
    #[arg(long = "sigma-mix")]
    sigma_mix: Option<String>,
    /// Size (false-alarm probability) values.
    #[arg(long)]
    q0: Option<String>,
    /// Values for the command's main axis.
    #[arg(long)]
    grid: Option<String>,
    /// Trials per hypothesis for simulate.
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file supplying any of the above; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut parameters = BTreeMap::new();
    for (key, value) in [
        ("energy", cli.energy),
        ("gamma", cli.gamma),
        ("sigma-mix", cli.sigma_mix),
        ("q0", cli.q0),
        ("grid", cli.grid),
        ("trials", cli.trials),
        ("seed", cli.seed),
    ] {
        if let Some(v) = value {
            parameters.insert(key.to_owned(), v);
        }
    }
    let overrides = Overrides {
        command: cli.command,
        parameters,
        format: cli.format,
        out: cli.out,
    };
    match RunSpec::resolve(cli.config.as_deref(), overrides).and_then(|spec| run(&spec)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
