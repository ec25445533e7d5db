//! Config-driven runner for the einselect models: parses a strict JSON
//! config, runs one experiment, and writes CSV artifacts plus a
//! `manifest.json` with content hashes.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use einselect::selfcheck::{self, SelfCheckOptions, SelfCheckReport};

pub use config::{ExperimentConfig, ExperimentKind, OUTPUT_ROOT_ENV};
pub use error::{CliError, CliResult};
pub use experiments::{run_experiment, Artifact, ExperimentOutput};
pub use output::{Manifest, OutputEntry, MANIFEST_FILE};

/// JSON Schema of the config format, printed by `einselect schema`.
pub const CONFIG_SCHEMA: &str = include_str!("../schema/config.schema.json");

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub manifest: Manifest,
}

pub fn load_config(path: &Path) -> CliResult<(ExperimentConfig, Vec<u8>)> {
    let raw = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&raw).map_err(|e| CliError::Config(format!("config is not UTF-8: {e}")))?;
    Ok((ExperimentConfig::from_json(text)?, raw))
}

/// Runs the experiment in `cfg` on a pool of `workers` threads (the rayon
/// default when `None`). Results do not depend on the worker count.
pub fn run_in_pool(cfg: &ExperimentConfig, workers: Option<usize>) -> CliResult<(ExperimentOutput, usize)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::config("workers", "must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    let threads = pool.current_num_threads();
    pool.install(|| run_experiment(cfg)).map(|out| (out, threads))
}

/// `einselect run`: executes the config at `path` and writes its artifacts
/// and manifest into the resolved output directory.
pub fn run(path: &Path, options: &RunOptions) -> CliResult<RunSummary> {
    let start = Instant::now();
    let (cfg, raw) = load_config(path)?;
    let workers = options.workers.or(cfg.workers);
    let output_dir = options.output_dir.clone().unwrap_or_else(|| cfg.resolve_output_dir());
    let (out, threads) = run_in_pool(&cfg, workers)?;

    output::ensure_dir(&output_dir)?;
    let mut outputs = Vec::with_capacity(out.artifacts.len());
    for a in &out.artifacts {
        output::write_atomic(&output_dir, &a.file_name, &a.bytes)?;
        outputs.push(OutputEntry {
            file: a.file_name.clone(),
            bytes: a.bytes.len(),
            sha256: output::sha256_hex(&a.bytes),
        });
    }
    let manifest = Manifest {
        toolkit: "einselect",
        version: env!("CARGO_PKG_VERSION"),
        experiment: cfg.kind(),
        seed: cfg.seed,
        config_path: path.display().to_string(),
        config_sha256: output::sha256_hex(&raw),
        workers: threads,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        outputs,
        summary: out.summary,
    };
    output::write_atomic(&output_dir, MANIFEST_FILE, manifest.to_json().as_bytes())?;
    Ok(RunSummary { output_dir, manifest })
}

/// `einselect selfcheck`: the report, and `Err` (exit 3) naming every
/// failed check.
pub fn run_selfcheck(options: SelfCheckOptions) -> (SelfCheckReport, CliResult<()>) {
    let report = selfcheck::run(options);
    let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
    let status = if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("self-check failed: {}", failed.join(", "))))
    };
    (report, status)
}
