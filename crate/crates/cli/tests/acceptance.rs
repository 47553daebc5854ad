//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line per criterion before asserting.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use weaklimit::operator::isometry_defect_witness;
use weaklimit::transformations::cyclic_shift;
use weaklimit_cli::{run_and_emit, run_experiment, ExperimentConfig, ExperimentKind, ExperimentReport, Format};

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn config(kind: ExperimentKind, overrides: &[(&str, &str)]) -> ExperimentConfig {
    let o: BTreeMap<String, String> = overrides.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    ExperimentConfig::new(kind, o, std::env::temp_dir()).expect("valid config")
}

fn timed(kind: ExperimentKind, overrides: &[(&str, &str)]) -> (ExperimentReport, Duration) {
    let start = Instant::now();
    let r = run_experiment(&config(kind, overrides)).expect("experiment runs");
    (r, start.elapsed())
}

/// All named checks pass; the detail lists each check's own detail.
fn checks(report: &ExperimentReport, names: &[&str]) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in names {
        match report.find_check(n) {
            Some(c) => {
                ok &= c.passed;
                detail.push(format!("{}={} ({})", c.name, if c.passed { "ok" } else { "FAILED" }, c.detail));
            }
            None => {
                ok = false;
                detail.push(format!("{n} missing"));
            }
        }
    }
    (ok, detail.join("; "))
}

fn outcome(
    id: u32,
    name: &'static str,
    report: &ExperimentReport,
    names: &[&str],
    elapsed: Duration,
    limit: Option<f64>,
) -> Outcome {
    let (passed, detail) = checks(report, names);
    Outcome { id, name, passed, detail, elapsed, limit: limit.map(Duration::from_secs_f64) }
}

fn folding() -> Outcome {
    let (r, t) = timed(ExperimentKind::FoldingCoeffs, &[]);
    let names = ["special_values", "closed_forms_vs_quadrature", "index_set_f1", "index_set_f2"];
    outcome(1, "folding coefficients", &r, &names, t, Some(1.0))
}

fn rotation() -> Outcome {
    let (r, t) = timed(ExperimentKind::RigidityScan, &[("rotation", "golden"), ("trunc", "64"), ("terms", "32")]);
    let names = ["decreasing_along_denominators", "final_below_tol", "record_minima_at_denominators"];
    outcome(2, "rotation rigidity", &r, &names, t, Some(5.0))
}

fn chacon() -> Outcome {
    let (r, t) = timed(ExperimentKind::ChaconLimits, &[("stage_min", "4"), ("stage_max", "7"), ("tol", "0.05")]);
    let mut o = outcome(3, "Chacon weak-limit scan", &r, &["minimum_decreases", "argmin_stabilizes", "final_below_tol"], t, Some(60.0));
    o.detail = format!("limit {}; {}", r.notes["limit_polynomial"], o.detail);
    o
}

fn lyapunov() -> Outcome {
    let (r, t) = timed(
        ExperimentKind::KroneckerDemo,
        &[("lyapunov_instances", "200"), ("atoms", "512"), ("cells", "8"), ("pipeline_instances", "0")],
    );
    outcome(4, "unimodular matching contract", &r, &["lyapunov_unimodular", "lyapunov_bound"], t, Some(10.0))
}

fn pipeline() -> Outcome {
    let (r, t) = timed(
        ExperimentKind::KroneckerDemo,
        &[("lyapunov_instances", "0"), ("pipeline_instances", "20"), ("pairs", "4"), ("eps", "0.05"), ("n_max", "1000000")],
    );
    outcome(5, "powers approximate multipliers", &r, &["pipeline_found", "pipeline_verified"], t, Some(120.0))
}

fn lamperti(report: &ExperimentReport, t: Duration) -> [Outcome; 2] {
    [
        outcome(6, "approximate eigenvector bound", report, &["eigen_bound", "eigen_normalized"], t, Some(10.0)),
        outcome(9, "L1 invariance and positivity", report, &["l1_invariance", "positivity"], t, None),
    ]
}

fn fock(report: &ExperimentReport, t: Duration) -> [Outcome; 2] {
    [
        outcome(7, "Fock lift identities", report, &["lift_functorial", "lift_powers", "graded_dimensions"], t, Some(10.0)),
        outcome(
            8,
            "cyclic-shift commutant",
            report,
            &["commutant_dimension", "commutant_circulant", "commutant_equals_toeplitz"],
            t,
            Some(5.0),
        ),
    ]
}

fn semigroup(report: &ExperimentReport, t: Duration) -> Outcome {
    let names = [
        "rotation_limit_commutes",
        "rotation_shift_detected",
        "rotation_shift_lipschitz",
        "chacon_limit_commutes",
        "chacon_shift_detected",
    ];
    outcome(10, "semigroup closure", report, &names, t, None)
}

fn isometry(report: &ExperimentReport) -> Outcome {
    let start = Instant::now();
    let (mut passed, mut detail) = checks(report, &["isometry_defect"]);
    let mut worst = 0.0f64;
    for m in 2..=8usize {
        let s = cyclic_shift(m).unwrap();
        for k in -3 * m as i64..=3 * m as i64 {
            if k.rem_euclid(m as i64) != 0 {
                let w = isometry_defect_witness(&s, k).unwrap();
                worst = worst.max((w.norm - std::f64::consts::FRAC_1_SQRT_2).abs());
            }
        }
    }
    passed &= worst <= 1e-12;
    detail.push_str(&format!("; m in 2..=8: max deviation from 1/sqrt 2 = {worst:.2e}"));
    Outcome { id: 11, name: "isometry defect", passed, detail, elapsed: start.elapsed(), limit: None }
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    for kind in ExperimentKind::ALL {
        let mut bytes = Vec::new();
        for dir in [a.path(), b.path()] {
            let cfg = ExperimentConfig::new(kind, BTreeMap::new(), dir).unwrap();
            let out = run_and_emit(&cfg, &[Format::Csv, Format::Json], false).unwrap();
            bytes.push(out.paths.iter().map(|p| std::fs::read(p).unwrap()).collect::<Vec<_>>());
        }
        if bytes[0] != bytes[1] {
            differing.push(kind.name());
        }
    }
    let passed = differing.is_empty();
    let detail = if passed {
        "CSV and JSON byte-identical across two runs of all 7 experiments".to_string()
    } else {
        format!("differing: {}", differing.join(", "))
    };
    Outcome { id: 12, name: "determinism", passed, detail, elapsed: start.elapsed(), limit: None }
}

#[test]
fn acceptance_criteria() {
    let mut all = vec![folding(), rotation(), chacon(), lyapunov(), pipeline()];
    let (lp, lp_t) = timed(ExperimentKind::LampertiSpectrum, &[]);
    let (fk, fk_t) = timed(ExperimentKind::FockDemo, &[("unitaries", "20"), ("m_max", "4"), ("trunc", "3"), ("n_max", "8")]);
    let (sg, sg_t) = timed(ExperimentKind::SemigroupSanity, &[]);
    all.extend(lamperti(&lp, lp_t));
    all.extend(fock(&fk, fk_t));
    all.push(semigroup(&sg, sg_t));
    all.push(isometry(&sg));
    all.push(determinism());
    all.sort_by_key(|o| o.id);

    let mut failed = Vec::new();
    for o in &mut all {
        if let Some(limit) = o.limit {
            if o.elapsed > limit {
                o.passed = false;
                o.detail.push_str(&format!("; runtime {:.2} s over {:.0} s", o.elapsed.as_secs_f64(), limit.as_secs_f64()));
            }
        }
        println!(
            "criterion {:>2} {:<34} {} [{:.2} s] {}",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.elapsed.as_secs_f64(),
            o.detail
        );
        if !o.passed {
            failed.push(o.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
