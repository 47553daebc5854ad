use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use weaklimit_cli::report::CSV_HEADER;
use weaklimit_cli::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentReport};

fn weaklimit(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaklimit"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("WEAKLIMIT_OUT")
        .output()
        .expect("binary runs")
}

fn entries(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .map(|rd| rd.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

#[test]
fn unknown_experiment_is_usage_error_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = weaklimit(&["no-such-experiment"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unknown_key_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = weaklimit(&["folding-coeffs", "--set", "bogus=1"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
    assert!(!out.exists());
    // --n-max is not declared by every experiment
    assert_eq!(weaklimit(&["fock-demo", "--trunc", "x"], &out).status.code(), Some(2));
}

#[test]
fn folding_defaults_report_the_four_halves() {
    let tmp = tempfile::tempdir().unwrap();
    let o = weaklimit(&["folding-coeffs", "--formats", "json", "--no-cache"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = ExperimentReport::from_json(&fs::read_to_string(tmp.path().join("folding-coeffs.json")).unwrap()).unwrap();
    assert!(r.passed);
    for (key, want) in [("<Sf1,f1>.re", 0.5), ("<Sf1,f-1>.re", -0.5), ("<Sf2,f2>.re", 0.5), ("<Sf2,f-2>.re", 0.5)] {
        assert!((r.summary[key] - want).abs() < 1e-12, "{key}");
    }
    assert_eq!(r.schema_version, 1);
    assert!(!r.anchor.is_empty());
}

#[test]
fn csv_only_writes_one_file() {
    let tmp = tempfile::tempdir().unwrap();
    let o = weaklimit(&["folding-coeffs", "--formats", "csv", "--no-cache"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(entries(tmp.path()), vec!["folding-coeffs.csv"]);
}

#[test]
fn svg_only_when_requested() {
    let tmp = tempfile::tempdir().unwrap();
    weaklimit(&["folding-coeffs", "--no-cache"], tmp.path());
    assert_eq!(entries(tmp.path()), vec!["folding-coeffs.csv", "folding-coeffs.json"]);
    let o = weaklimit(&["folding-coeffs", "--formats", "svg,csv", "--no-cache"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(tmp.path().join("folding-coeffs.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn rigidity_scan_rows_and_fibonacci_minima() {
    let tmp = tempfile::tempdir().unwrap();
    let o = weaklimit(&["rigidity-scan", "--n-max", "1000", "--set", "rotation=golden", "--no-cache"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("rigidity-scan.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let d: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(d.len(), 1000);
    let mut records = Vec::new();
    let mut best = f64::INFINITY;
    for (i, v) in d.iter().enumerate() {
        if *v < best {
            best = *v;
            records.push(i as u64 + 1);
        }
    }
    let mut fib = vec![1u64, 2];
    while fib[fib.len() - 1] + fib[fib.len() - 2] <= 1000 {
        fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
    }
    assert_eq!(records, fib);
}

#[test]
fn threshold_failure_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let o = weaklimit(&["folding-coeffs", "--set", "quad_tol=1e-30", "--no-cache"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL closed_forms_vs_quadrature"));
    assert!(tmp.path().join("folding-coeffs.json").exists());
}

#[test]
fn unwritable_output_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let o = weaklimit(&["folding-coeffs", "--no-cache"], &blocker.join("sub"));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_root_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_weaklimit"))
        .args(["fock-demo", "--formats", "csv", "--no-cache"])
        .env("WEAKLIMIT_OUT", tmp.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(tmp.path().join("fock-demo.csv").exists());
}

#[test]
fn config_file_and_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("scan.cfg");
    fs::write(&cfg, "# short scan\nn_max = 50\ntrunc = 16\nterms = 8 # fewer terms\ntol = 0.5\n").unwrap();
    let out = tmp.path().join("out");
    let args = ["rigidity-scan", "--config", cfg.to_str().unwrap()];
    let first = weaklimit(&args, &out);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let csv1 = fs::read(out.join("rigidity-scan.csv")).unwrap();
    assert_eq!(String::from_utf8_lossy(&csv1).lines().count(), 51);
    assert_eq!(entries(&out.join(".cache")).len(), 1);
    let second = weaklimit(&args, &out);
    assert!(String::from_utf8_lossy(&second.stderr).contains("loaded from cache"));
    assert_eq!(fs::read(out.join("rigidity-scan.csv")).unwrap(), csv1);
    // a flag override changes the key
    weaklimit(&["rigidity-scan", "--config", cfg.to_str().unwrap(), "--seed", "3"], &out);
    assert_eq!(entries(&out.join(".cache")).len(), 2);
}

#[test]
fn json_round_trips_to_equal_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::defaults(ExperimentKind::FockDemo, tmp.path());
    let r = run_experiment(&cfg).unwrap();
    let back = ExperimentReport::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_json(), r.to_json());
}

#[test]
fn parallel_flag_keeps_grid_results() {
    let tmp = tempfile::tempdir().unwrap();
    let a = run_experiment(&ExperimentConfig::defaults(ExperimentKind::LampertiSpectrum, tmp.path())).unwrap();
    let mut o = std::collections::BTreeMap::new();
    o.insert("parallel".to_string(), "true".to_string());
    let b = run_experiment(&ExperimentConfig::new(ExperimentKind::LampertiSpectrum, o, tmp.path()).unwrap()).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_ne!(a.param_hash, b.param_hash);
}
