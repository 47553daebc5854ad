use std::fs;
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::report::{write_atomic, ExperimentReport};

pub fn cache_path(cfg: &ExperimentConfig) -> PathBuf {
    cfg.out_dir.join(".cache").join(format!("{}.json", cfg.param_hash()))
}

/// Cached report for this configuration, if one exists and parses.
/// A stale or foreign file is an error rather than a silent miss.
pub fn load(cfg: &ExperimentConfig) -> CliResult<Option<ExperimentReport>> {
    let path = cache_path(cfg);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(CliError::io(&path, e)),
    };
    let report = ExperimentReport::from_json(&text).map_err(|e| format_error(&path, e.to_string()))?;
    if report.param_hash != cfg.param_hash() || report.experiment != cfg.kind.name() {
        return Err(format_error(&path, "cache entry does not match its key".into()));
    }
    Ok(Some(report))
}

pub fn store(cfg: &ExperimentConfig, report: &ExperimentReport) -> CliResult<()> {
    write_atomic(&cache_path(cfg), report.to_json().as_bytes())
}

fn format_error(path: &Path, message: String) -> CliError {
    CliError::Format { path: path.to_path_buf(), message }
}
