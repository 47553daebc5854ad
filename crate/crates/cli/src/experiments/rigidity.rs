use weaklimit::operator::WeightedVectorSequence;
use weaklimit::rigidity::{cf_denominators, lambda_rigidity_scan, lambda_rigidity_scan_parallel, RigidityReport};
use weaklimit::transformations::{mean_zero_restrict, rotation_koopman, RotationSpec};
use weaklimit::{OperatorMatrix, C64};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::report::ExperimentReport;

const PARALLEL_CHUNKS: usize = 8;

/// Mean-zero rotation Koopman matrix and its metric sequence.
pub struct RotationSetup {
    pub alpha: f64,
    pub t: OperatorMatrix,
    pub seq: WeightedVectorSequence,
}

/// `trunc` is the number of mean-zero Fourier modes and must be even.
pub fn rotation_operator(rotation: &str, trunc: usize, terms: usize) -> CliResult<RotationSetup> {
    if trunc == 0 || !trunc.is_multiple_of(2) {
        return Err(CliError::usage("trunc must be a positive even number of mean-zero modes"));
    }
    let spec = match rotation {
        "golden" => RotationSpec::golden(trunc / 2)?,
        other => {
            let alpha: f64 = other
                .parse()
                .map_err(|_| CliError::usage(format!("rotation must be 'golden' or a number, got '{other}'")))?;
            RotationSpec::new(alpha, trunc / 2)?
        }
    };
    let t = mean_zero_restrict(&rotation_koopman(&spec))?;
    let seq = WeightedVectorSequence::canonical(t.dim(), terms)?;
    Ok(RotationSetup { alpha: spec.alpha(), t, seq })
}

pub(crate) fn scan(setup: &RotationSetup, lambda: C64, n_max: u64, parallel: bool) -> CliResult<RigidityReport> {
    Ok(if parallel {
        lambda_rigidity_scan_parallel(&setup.t, true, lambda, n_max, &setup.seq, PARALLEL_CHUNKS)?
    } else {
        lambda_rigidity_scan(&setup.t, lambda, n_max, &setup.seq)?
    })
}

/// Distinct continued-fraction denominators of `alpha` up to `n_max`.
pub(crate) fn denominators_up_to(alpha: f64, n_max: u64) -> CliResult<Vec<u64>> {
    let cf = cf_denominators(alpha, 64)?;
    let mut q: Vec<u64> = cf.denominators.into_iter().filter(|&q| q >= 1 && q <= n_max).collect();
    q.dedup();
    Ok(q)
}

pub(crate) fn run(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let setup = rotation_operator(cfg.raw("rotation")?, cfg.usize("trunc")?, cfg.usize("terms")?)?;
    let n_max = cfg.u64("n_max")?;
    let turns = cfg.f64("lambda_turns")?;
    let tol = cfg.positive("tol")?;
    let lambda = C64::from_polar(1.0, std::f64::consts::TAU * turns);
    let r = scan(&setup, lambda, n_max, cfg.parallel())?;
    for e in &r.entries {
        report.row(e.n as i64, "lambda", e.distance);
    }
    let records: Vec<u64> = r.record_minima().iter().map(|e| e.n).collect();
    report.summary("alpha", setup.alpha);
    report.summary("best_n", r.best.n as f64);
    report.summary("best_distance", r.best.distance);
    report.note("record_minima", join(&records));
    report.note("sequence", r.seq_label.clone());

    if turns.rem_euclid(1.0) == 0.0 {
        let q = denominators_up_to(setup.alpha, n_max)?;
        report.note("denominators", join(&q));
        report.check(
            "record_minima_at_denominators",
            records == q,
            format!("records [{}] vs denominators [{}]", join(&records), join(&q)),
        );
        let along: Vec<f64> = q.iter().map(|&n| r.distance_at(n).unwrap_or(f64::NAN)).collect();
        let decreasing = along.windows(2).all(|w| w[1] < w[0]);
        report.check("decreasing_along_denominators", decreasing && !along.is_empty(), format!("{along:?}"));
        let last = along.last().copied().unwrap_or(f64::INFINITY);
        report.summary("final_distance", last);
        report.check("final_below_tol", last < tol, format!("{last:.6e} < {tol:e}"));
    } else {
        report.check(
            "best_below_tol",
            r.best.distance < tol,
            format!("min distance {:.6e} at n = {}", r.best.distance, r.best.n),
        );
    }
    Ok(())
}

pub(crate) fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}
