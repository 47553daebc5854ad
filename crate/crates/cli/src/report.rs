use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::svg::render_svg;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "experiment,param_hash,n,candidate,value";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: i64,
    pub candidate: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub anchor: String,
    pub param_hash: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    /// Named scalar results.
    pub summary: BTreeMap<String, f64>,
    pub notes: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            experiment: cfg.kind.name().to_string(),
            anchor: cfg.kind.anchor().to_string(),
            param_hash: cfg.param_hash(),
            seed: cfg.seed(),
            config: cfg.params().clone(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            notes: BTreeMap::new(),
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn row(&mut self, n: i64, candidate: impl Into<String>, value: f64) {
        self.rows.push(Row { n, candidate: candidate.into(), value });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn summary(&mut self, key: impl Into<String>, value: f64) {
        self.summary.insert(key.into(), value);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.insert(key.into(), value.into());
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                self.experiment.as_str(),
                self.param_hash.as_str(),
                &r.n.to_string(),
                r.candidate.as_str(),
                &r.value.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::usage(format!("unknown format '{other}' (expected csv, json, svg)"))),
        }
    }
}

/// Comma-separated list, deduplicated.
pub fn parse_formats(s: &str) -> CliResult<Vec<Format>> {
    let mut out: Vec<Format> = s.split(',').filter(|x| !x.trim().is_empty()).map(str::parse).collect::<CliResult<_>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::usage("at least one output format is required"));
    }
    Ok(out)
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

/// Writes `<dir>/<experiment>.<ext>` for each format; returns the paths.
pub fn emit_report(report: &ExperimentReport, dir: &Path, formats: &[Format]) -> CliResult<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for &f in formats {
        let path = dir.join(format!("{}.{}", report.experiment, f.extension()));
        let body = match f {
            Format::Csv => report.to_csv(),
            Format::Json => report.to_json(),
            Format::Svg => render_svg(report),
        };
        write_atomic(&path, body.as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}
