use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

use repute_cli::commands::{cmd_run, cmd_tables, cmd_validate, resolve_out_dir};
use repute_cli::config::load_config;
use repute_cli::tables::TableKind;

/// Reputation-engine market simulator.
#[derive(Parser)]
#[command(name = "repute", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario configs and write CSV metrics plus a summary.
    Run {
        /// Scenario config file(s).
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Seed(s), comma-separated; defaults to each config's own seed.
        #[arg(long, value_delimiter = ',')]
        seed: Vec<u64>,
        /// Output directory (default: $REPUTE_OUT, then ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for fanning out independent runs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Reproduce a built-in reference table and print computed vs reference.
    Tables {
        which: TableArg,
        /// Exit non-zero if any checked cell drifts beyond tolerance.
        #[arg(long)]
        check: bool,
        /// Output directory for the table CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scenario config without running it.
    Validate { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    #[value(alias = "t1")]
    Table1,
    #[value(alias = "t2")]
    Table2,
    #[value(alias = "t6")]
    Table6,
}

impl From<TableArg> for TableKind {
    fn from(a: TableArg) -> Self {
        match a {
            TableArg::Table1 => TableKind::Table1,
            TableArg::Table2 => TableKind::Table2,
            TableArg::Table6 => TableKind::Table6,
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            configs,
            seed,
            out,
            jobs,
        } => {
            let seeds = if seed.is_empty() {
                // Default to each config's declared seed; to keep the run
                // grid rectangular this requires them to agree.
                let mut declared = Vec::new();
                for c in &configs {
                    declared.push(load_config(c).map_err(|e| anyhow::anyhow!("{e}"))?.seed);
                }
                declared.dedup();
                if declared.len() > 1 {
                    anyhow::bail!(
                        "configs declare different seeds; pass --seed to disambiguate"
                    );
                }
                declared
            } else {
                seed
            };
            cmd_run(&configs, &seeds, &resolve_out_dir(out), jobs)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables { which, check, out } => {
            let ok = cmd_tables(which.into(), check, &resolve_out_dir(out))?;
            Ok(if ok || !check {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Validate { config } => Ok(if cmd_validate(&config) {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }),
    }
}
