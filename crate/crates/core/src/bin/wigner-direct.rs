use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wigner_direct::cli_io::{parse_config_with_overrides, run_with_threads, Mode};

#[derive(Parser)]
#[command(version, about = "Order-g² Wigner function evolution for a particle coupled to a scalar field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wigner transform of the initial state.
    Transform(Common),
    /// W(t) at every output time, with diagrams and diagnostics.
    Evolve(Common),
    /// Observables at every output time, without grid files.
    Observables(Common),
    /// Fast path against the position-space oracle.
    Certify(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Replace or add a configuration entry, e.g. `model.g=0.2`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads for the numerical kernels.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, common) = match cli.command {
        Command::Transform(c) => (Mode::Transform, c),
        Command::Evolve(c) => (Mode::Evolve, c),
        Command::Observables(c) => (Mode::Observables, c),
        Command::Certify(c) => (Mode::Certify, c),
    };
    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.config.display());
            return ExitCode::from(2);
        }
    };
    let mut cfg = match parse_config_with_overrides(&text, &common.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    cfg.mode = mode;
    match run_with_threads(&cfg, common.threads) {
        Ok(manifest) => {
            for slice in &manifest.slices {
                for c in slice.checks.iter().filter(|c| !c.pass) {
                    eprintln!("t = {}: {} = {:.3e} exceeds {:.1e}", slice.t, c.name, c.value, c.limit);
                }
            }
            println!(
                "{} files written to {}",
                manifest.files.len() + 1,
                cfg.outputs.dir.display()
            );
            if manifest.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
