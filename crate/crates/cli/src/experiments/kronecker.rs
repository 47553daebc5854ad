use num_rational::Rational64;
use rand::Rng;
use weaklimit::kronecker::{
    approximate_in_powers, lyapunov_match, Angle, AtomicSpectralMeasure, CellPartition, MultiplicationData, TestPair,
};
use weaklimit::random::{gaussian_vector, seeded, SeededRng};
use weaklimit::C64;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::grid;
use crate::report::ExperimentReport;

const LYAPUNOV_STREAM: u64 = 1 << 48;
const PIPELINE_STREAM: u64 = 2 << 48;
const MAX_WEIGHT: i64 = 20;
const PIPELINE_ATOMS: usize = 3;

pub(crate) fn stream(seed: u64, tag: u64, i: usize) -> SeededRng {
    seeded(seed ^ tag ^ i as u64)
}

/// Uniform in the closed unit disc.
fn disc_point(rng: &mut SeededRng) -> C64 {
    let r: f64 = rng.random_range(0.0..=1.0);
    C64::from_polar(r.sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
}

pub struct LyapunovOutcome {
    pub unimodular_defect: f64,
    pub worst_ratio: f64,
    pub violations: usize,
}

pub fn lyapunov_instance(seed: u64, i: usize, atoms: usize, cells: usize) -> CliResult<LyapunovOutcome> {
    let mut rng = stream(seed, LYAPUNOV_STREAM, i);
    let w: Vec<i64> = (0..atoms).map(|_| rng.random_range(1..=MAX_WEIGHT)).collect();
    let total: i64 = w.iter().sum();
    let angles = (0..atoms).map(|_| Angle::Real(rng.random_range(0.0..1.0))).collect();
    let measure = AtomicSpectralMeasure::new(angles, w.iter().map(|&x| Rational64::new(x, total)).collect())?;
    let labels: Vec<usize> = (0..atoms).map(|_| rng.random_range(0..cells)).collect();
    let f = MultiplicationData::new((0..atoms).map(|_| disc_point(&mut rng)).collect())?;
    let r = lyapunov_match(&measure, &CellPartition::from_labels(&labels), &f)?;
    let unimodular_defect = r.h.values().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let mut worst_ratio = 0.0f64;
    let mut violations = 0;
    for (e, b) in r.cell_errors.iter().zip(&r.cell_bounds) {
        worst_ratio = worst_ratio.max(e / b);
        violations += usize::from(e > b);
    }
    Ok(LyapunovOutcome { unimodular_defect, worst_ratio, violations })
}

pub struct PipelineOutcome {
    pub n: Option<i64>,
    pub lemma_error: f64,
    pub gamma: f64,
    /// Recomputed here at the returned `n`.
    pub verified: Option<f64>,
    /// Smallest `max_i` discrepancy over every `|n| ≤ n_max`.
    pub best_scan: (i64, f64),
    pub diagnostics: String,
}

/// Three atoms certified independent up to `bound`, `f` uniform in the
/// disc, test pairs normalized in `L²(μ)`.
pub fn pipeline_instance(
    seed: u64,
    i: usize,
    pairs: usize,
    eps: f64,
    n_max: u64,
    bound: i64,
) -> CliResult<PipelineOutcome> {
    let mut rng = stream(seed, PIPELINE_STREAM, i);
    let measure = loop {
        let theta: Vec<f64> = (0..PIPELINE_ATOMS).map(|_| rng.random_range(0.0..1.0)).collect();
        let m = AtomicSpectralMeasure::uniform(&theta)?.certify_independence(bound, 1e-9)?;
        if m.independence().is_some_and(|c| c.passed()) {
            break m;
        }
    };
    let k = measure.len();
    let f = MultiplicationData::new((0..k).map(|_| disc_point(&mut rng)).collect())?;
    let w = measure.weights_f64();
    let mut unit = || {
        let v = gaussian_vector(&mut rng, k);
        let norm = v.iter().zip(&w).map(|(z, wk)| wk * z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect::<Vec<_>>()
    };
    let test: Vec<TestPair> = (0..pairs).map(|_| (unit(), unit())).collect();
    let r = approximate_in_powers(&measure, &f, &test, eps, n_max)?;

    let theta: Vec<f64> = measure.angles().iter().map(Angle::turns).collect();
    let coeffs: Vec<Vec<C64>> = test.iter().map(|(a, b)| (0..k).map(|j| w[j] * a[j] * b[j].conj()).collect()).collect();
    let targets: Vec<C64> = coeffs.iter().map(|c| (0..k).map(|j| c[j] * f.values()[j]).sum()).collect();
    let worst = |n: i64| -> f64 {
        let z: Vec<C64> = theta
            .iter()
            .map(|t| {
                let x = (n as f64 * t).rem_euclid(1.0);
                C64::from_polar(1.0, std::f64::consts::TAU * x)
            })
            .collect();
        coeffs
            .iter()
            .zip(&targets)
            .map(|(c, tg)| ((0..k).map(|j| c[j] * z[j]).sum::<C64>() - tg).norm())
            .fold(0.0, f64::max)
    };
    let verified = r.n.map(worst);
    let n_max = n_max as i64;
    let mut best_scan = (0, worst(0));
    for n in (1..=n_max).flat_map(|n| [n, -n]) {
        let d = worst(n);
        if d < best_scan.1 {
            best_scan = (n, d);
        }
    }
    Ok(PipelineOutcome {
        n: r.n,
        lemma_error: r.lemma_error,
        gamma: r.gamma,
        verified,
        best_scan,
        diagnostics: r.diagnostics,
    })
}

pub(crate) fn run(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let seed = cfg.seed();
    let lyap_n = cfg.usize("lyapunov_instances")?;
    let atoms = cfg.usize("atoms")?;
    let cells = cfg.usize("cells")?;
    if atoms == 0 || cells == 0 {
        return Err(CliError::usage("atoms and cells must be positive"));
    }
    let pipe_n = cfg.usize("pipeline_instances")?;
    let pairs = cfg.usize("pairs")?;
    let eps = cfg.positive("eps")?;
    let n_max = cfg.u64("n_max")?;
    let bound = cfg.i64("independence_bound")?;

    let lyap: Vec<LyapunovOutcome> = grid(cfg.parallel(), lyap_n, |i| lyapunov_instance(seed, i, atoms, cells))
        .into_iter()
        .collect::<CliResult<_>>()?;
    let mut violations = 0;
    let mut defect = 0.0f64;
    for (i, o) in lyap.iter().enumerate() {
        report.row(i as i64, "lyapunov.error_over_bound", o.worst_ratio);
        violations += o.violations;
        defect = defect.max(o.unimodular_defect);
    }
    report.summary("lyapunov.max_unimodular_defect", defect);
    report.summary("lyapunov.violations", violations as f64);
    report.check(
        "lyapunov_unimodular",
        defect <= 4.0 * f64::EPSILON,
        format!("max ||h|-1| = {defect:.3e} over {lyap_n} instances"),
    );
    report.check("lyapunov_bound", violations == 0, format!("{violations} cells above 3 w_max"));

    let pipe: Vec<PipelineOutcome> =
        grid(cfg.parallel(), pipe_n, |i| pipeline_instance(seed, i, pairs, eps, n_max, bound))
            .into_iter()
            .collect::<CliResult<_>>()?;
    let mut found = 0;
    let mut confirmed = 0;
    for (i, o) in pipe.iter().enumerate() {
        let n = i as i64;
        report.row(n, "pipeline.n", o.n.map_or(-1.0, |x| x as f64));
        report.row(n, "pipeline.lemma_error", o.lemma_error);
        report.row(n, "pipeline.best_scan_discrepancy", o.best_scan.1);
        if let Some(v) = o.verified {
            report.row(n, "pipeline.verified_discrepancy", v);
        }
        report.note(format!("pipeline.{i}"), &o.diagnostics);
        found += usize::from(o.n.is_some());
        confirmed += usize::from(o.verified.is_some_and(|v| v < eps));
    }
    let best = pipe.iter().map(|o| o.best_scan.1).fold(f64::INFINITY, f64::min);
    report.summary("pipeline.found", found as f64);
    report.summary("pipeline.confirmed", confirmed as f64);
    report.summary("pipeline.best_scan_discrepancy", best);
    report.summary("pipeline.gamma", pipe.first().map_or(eps / 2.0, |o| o.gamma));
    report.check("pipeline_found", found == pipe_n, format!("{found}/{pipe_n} instances found n with |n| <= {n_max}"));
    report.check(
        "pipeline_verified",
        confirmed == pipe_n,
        format!("{confirmed}/{pipe_n} confirmed below {eps}; best exhaustive max discrepancy {best:.4e}"),
    );
    Ok(())
}
