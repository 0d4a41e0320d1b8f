//! Experiment registry, file formats and command-line driver for the
//! `hardy-core` diagnostics.

pub mod config;
pub mod defaults;
mod error;
mod experiments;
pub mod output;
pub mod registry;
pub mod report;

use std::path::Path;

pub use config::{load_config, parse_config, ExperimentConfig};
pub use error::{LabError, LabResult};
pub use report::{Outcome, Report, VerdictRow};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "HARDY_LAB_THREADS";

/// Thread cap from [`THREADS_ENV`]; `None` when unset.
pub fn thread_cap() -> LabResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(LabError::Validation(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
    }
}

/// Runs `f` on a pool of `threads` workers, or rayon's default size.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> LabResult<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| LabError::Validation(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Resolves `config`, runs the experiment and writes every output under
/// `<output_dir>/<experiment>/`. Outputs depend only on the configuration.
pub fn run_experiment(config: &ExperimentConfig) -> LabResult<Report> {
    let resolved = config.resolve()?;
    let dir = resolved.output_dir().join(&resolved.experiment);
    std::fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
    let mut ctx = experiments::Ctx { dir: dir.clone(), files: Vec::new(), rows: Vec::new() };
    experiments::run(&resolved, &mut ctx)?;
    let mut report = Report::new(resolved, ctx.rows, ctx.files);
    report.write(&dir)?;
    Ok(report)
}

/// [`run_experiment`] on the config file at `path`.
pub fn run_config_file(path: &Path) -> LabResult<Report> {
    run_experiment(&load_config(path)?)
}
