mod config;
mod output;
mod scenarios;
mod svg;

use clap::{Parser, Subcommand};
use output::{Formats, Output};
use scenarios::{Failure, Scenario};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "slowsound", version, about = "Slow sound in a dark-soliton gas: scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its outputs.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(value_enum)]
    scenario: Scenario,
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Comma-separated output formats.
    #[arg(long, default_value = "csv,json,svg")]
    format: Formats,
    /// Override a configuration value, e.g. `--set reduced.coupling_ratio=1.1`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, value_parser = ["closed", "quadrature"])]
    coupling_mode: Option<String>,
    #[arg(long, value_parser = ["track", "fixed"])]
    delta_mode: Option<String>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    scenario: &'a str,
    version: &'a str,
    config: &'a config::Config,
    params: &'a slowsound::ReducedParams,
    files: Vec<String>,
    status: &'a str,
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut cfg = config::load(args.config.as_deref(), &args.set).map_err(Failure::Config)?;
    if let Some(m) = &args.coupling_mode {
        cfg.model.coupling_mode = m.parse().map_err(|e: slowsound::Error| Failure::Config(e.to_string()))?;
    }
    if let Some(m) = &args.delta_mode {
        cfg.model.delta_mode = m.parse().map_err(|e: slowsound::Error| Failure::Config(e.to_string()))?;
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Config(e.to_string()))?;
    }
    let params = cfg.params()?;
    for w in &params.warnings {
        eprintln!("warning: {w}");
    }
    let mut out = Output::new(&args.out, args.format)?;
    let result = scenarios::run(args.scenario, &cfg, &params, &mut out);
    let status = match &result {
        Ok(()) => "ok",
        Err(Failure::Validation(_)) => "validation-failed",
        Err(_) => {
            out.discard();
            return result;
        }
    };
    let files = out.files();
    let manifest =
        Manifest { scenario: args.scenario.name(), version: env!("CARGO_PKG_VERSION"), config: &cfg, params: &params, files, status };
    if let Err(e) = out.write_json("manifest", &manifest) {
        out.discard();
        return Err(e.into());
    }
    result
}

fn main() -> ExitCode {
    let Command::Run(args) = Cli::parse().command;
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
