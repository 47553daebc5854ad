use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use weaklimit_cli::config::parse_assignment;
use weaklimit_cli::{
    parse_config_text, parse_formats, run_and_emit, CliError, CliResult, ExperimentConfig, ExperimentKind,
    RunOutcome,
};

const OUT_ENV: &str = "WEAKLIMIT_OUT";
const DEFAULT_OUT: &str = "weaklimit-out";

/// Run a named weak-limit experiment and write its report.
#[derive(Debug, Parser)]
#[command(name = "weaklimit", version)]
struct Args {
    /// rigidity-scan, folding-coeffs, chacon-limits, kronecker-demo,
    /// fock-demo, lamperti-spectrum or semigroup-sanity
    experiment: String,
    /// Flat key=value parameter file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: $WEAKLIMIT_OUT or ./weaklimit-out]
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    trunc: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated subset of csv,json,svg
    #[arg(long, default_value = "csv,json")]
    formats: String,
    /// Extra parameter override, repeatable
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_assignment)]
    set: Vec<(String, String)>,
    /// Parallelize independent grid cells
    #[arg(long)]
    parallel: bool,
    /// Ignore and do not write the results cache
    #[arg(long)]
    no_cache: bool,
}

fn configure(args: &Args) -> CliResult<ExperimentConfig> {
    let kind: ExperimentKind = args.experiment.parse()?;
    let mut params = BTreeMap::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        params = parse_config_text(&text)?;
    }
    let flags = [
        ("seed", args.seed.map(|v| v.to_string())),
        ("n_max", args.n_max.map(|v| v.to_string())),
        ("trunc", args.trunc.map(|v| v.to_string())),
        ("tol", args.tol.map(|v| v.to_string())),
        ("parallel", args.parallel.then(|| "true".to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            params.insert(k.to_string(), v);
        }
    }
    params.extend(args.set.iter().cloned());
    let out = args
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    ExperimentConfig::new(kind, params, out)
}

fn execute(args: &Args) -> CliResult<bool> {
    let cfg = configure(args)?;
    let formats = parse_formats(&args.formats)?;
    let RunOutcome { report, paths, elapsed } = run_and_emit(&cfg, &formats, !args.no_cache)?;
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for p in &paths {
        println!("wrote {}", p.display());
    }
    match elapsed {
        Some(t) => eprintln!("{} finished in {:.3} s", report.experiment, t.as_secs_f64()),
        None => eprintln!("{} loaded from cache", report.experiment),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("weaklimit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
