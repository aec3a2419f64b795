// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wdi_lab::{commands, CliError, RunConfig, Subcommand};

/// Series verdicts, Hausdorff contents, transference checks and limsup
/// scans for weighted inhomogeneous Dirichlet non-improvability.
///
/// Exit codes: 0 ok, 2 configuration or validation error, 3 enumeration
/// budget exceeded, 4 an engine invariant failed.
#[derive(Debug, Parser)]
#[command(name = "wdi", version)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for reports (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: &Cli) -> Result<commands::Outputs, CliError> {
    let resolved = RunConfig::load(&cli.config)?.resolve(cli.subcommand, cli.seed)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Config {
                field: "--workers".into(),
                message: "must be at least 1".into(),
            });
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| CliError::Serialize(e.to_string()))?;
    pool.install(|| commands::run(&resolved, &cli.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.json.display());
            if let Some(csv) = out.csv {
                println!("{}", csv.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("wdi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
