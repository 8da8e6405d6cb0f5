//! Subcommand implementations.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use repute_core::sim::run_scenario;

use crate::config::{load_config, ConfigError};
use crate::report::write_run_artifacts;
use crate::tables::{compute_table, render_table, render_table_csv, TableKind};

/// Output directory resolution: flag, then the `REPUTE_OUT` environment
/// variable, then `./out`.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("REPUTE_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn run_stem(config: &Path) -> String {
    config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into())
}

/// Runs one (config, seed) pair and writes its artifacts into `dir`.
pub fn run_single(config: &Path, seed: u64, dir: &Path) -> Result<()> {
    let loaded = load_config(config).map_err(|e| anyhow::anyhow!("{e}"))?;
    let output = run_scenario(&loaded.setup, seed)
        .with_context(|| format!("running {}", config.display()))?;
    write_run_artifacts(dir, &output, seed)
        .with_context(|| format!("writing artifacts to {}", dir.display()))?;
    println!(
        "{} (seed {seed}): {} transactions, {} skipped demands -> {}",
        config.display(),
        output.transcript.len(),
        output.metrics.skipped_demands,
        dir.display()
    );
    Ok(())
}

/// Fans the (config, seed) grid out over up to `jobs` worker threads.
/// A single pair writes directly into the output directory; multiple pairs
/// get one subdirectory each.
pub fn cmd_run(configs: &[PathBuf], seeds: &[u64], out_dir: &Path, jobs: usize) -> Result<()> {
    let mut runs: Vec<(PathBuf, u64, PathBuf)> = Vec::new();
    let single = configs.len() == 1 && seeds.len() == 1;
    for config in configs {
        for &seed in seeds {
            let dir = if single {
                out_dir.to_path_buf()
            } else {
                out_dir.join(format!("{}-seed{seed}", run_stem(config)))
            };
            runs.push((config.clone(), seed, dir));
        }
    }

    let jobs = jobs.max(1).min(runs.len().max(1));
    if jobs == 1 {
        for (config, seed, dir) in &runs {
            run_single(config, *seed, dir)?;
        }
        return Ok(());
    }

    let failures = std::sync::Mutex::new(Vec::<String>::new());
    let queue = std::sync::Mutex::new(runs.into_iter());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().next();
                let Some((config, seed, dir)) = next else {
                    break;
                };
                if let Err(e) = run_single(&config, seed, &dir) {
                    failures
                        .lock()
                        .unwrap()
                        .push(format!("{} (seed {seed}): {e:#}", config.display()));
                }
            });
        }
    });
    let failures = failures.into_inner().unwrap();
    if !failures.is_empty() {
        bail!("{} run(s) failed:\n{}", failures.len(), failures.join("\n"));
    }
    Ok(())
}

/// Validates a config; returns true when it loads cleanly.
pub fn cmd_validate(config: &Path) -> bool {
    match load_config(config) {
        Ok(loaded) => {
            println!(
                "{}: OK ({} buyers, {} sellers, {} goods, {} scheduled demands, {} steps)",
                config.display(),
                loaded.setup.buyers.len(),
                loaded.setup.sellers.len(),
                loaded.setup.goods.len(),
                loaded.setup.schedule.len(),
                loaded.setup.steps
            );
            true
        }
        Err(e @ (ConfigError::Io { .. } | ConfigError::Parse { .. })) => {
            eprintln!("{e}");
            false
        }
        Err(e @ ConfigError::Invalid { .. }) => {
            eprint!("{e}");
            false
        }
    }
}

/// Recomputes a reference table, prints it, writes its CSV, and (in check
/// mode) reports whether every checked cell is within tolerance.
pub fn cmd_tables(kind: TableKind, check: bool, out_dir: &Path) -> Result<bool> {
    let table = compute_table(kind);
    print!("{}", render_table(&table));
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let csv_path = out_dir.join(format!("{}.csv", kind.name()));
    std::fs::write(&csv_path, render_table_csv(&table))
        .with_context(|| format!("writing {}", csv_path.display()))?;
    println!("csv: {}", csv_path.display());
    let ok = table.all_within_tolerance();
    if check {
        println!(
            "check: {}",
            if ok { "PASS" } else { "FAIL (tolerance exceeded)" }
        );
    }
    Ok(ok)
}
