//! Experiment runner for the `weaklimit` library: flat `key=value`
//! configuration, CSV/JSON/SVG reports, and a results cache keyed by a
//! hash of the configuration.

pub mod cache;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;
pub mod svg;

use std::path::PathBuf;
use std::time::{Duration, Instant};

pub use config::{parse_config_text, ExperimentConfig, ExperimentKind};
pub use error::{CliError, CliResult};
pub use experiments::run_experiment;
pub use report::{emit_report, parse_formats, ExperimentReport, Format};

/// What [`run_and_emit`] did.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: ExperimentReport,
    pub paths: Vec<PathBuf>,
    /// Wall-clock time of the computation; `None` when served from cache.
    pub elapsed: Option<Duration>,
}

/// Runs (or loads from cache) and writes the requested formats.
pub fn run_and_emit(cfg: &ExperimentConfig, formats: &[Format], use_cache: bool) -> CliResult<RunOutcome> {
    let cached = if use_cache { cache::load(cfg)? } else { None };
    let (report, elapsed) = match cached {
        Some(r) => (r, None),
        None => {
            let start = Instant::now();
            let r = run_experiment(cfg)?;
            let elapsed = start.elapsed();
            if use_cache {
                cache::store(cfg, &r)?;
            }
            (r, Some(elapsed))
        }
    };
    let paths = emit_report(&report, &cfg.out_dir, formats)?;
    Ok(RunOutcome { report, paths, elapsed })
}
