use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use templag_cli::{run, Config, Experiment};

/// Generalized Laguerre spectral experiments for tempered fractional equations.
#[derive(Debug, Parser)]
#[command(name = "templag", version)]
struct Args {
    experiment: Experiment,
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides as --key value pairs.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

/// Pulls a --config given after the first override out of the override list.
fn extract_config(mut config: Option<PathBuf>, overrides: Vec<String>) -> (Option<PathBuf>, Vec<String>) {
    let mut rest = Vec::new();
    let mut it = overrides.into_iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            config = it.next().map(PathBuf::from);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else {
            rest.push(arg);
        }
    }
    (config, rest)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (config, overrides) = extract_config(args.config, args.overrides);
    let result = config
        .as_deref()
        .map_or_else(|| Ok(Config::default()), Config::load)
        .and_then(|mut config| {
            config.apply_overrides(&overrides)?;
            run(args.experiment, config)
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("templag: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
