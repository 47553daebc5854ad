use weaklimit::operator::PolynomialInT;
use weaklimit::rigidity::{convex_half_candidates, level_tests, weak_limit_detect_levels};
use weaklimit::transformations::{rank_one_build, RankOneSpec};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::report::ExperimentReport;

/// Finest stage whose level indicators enter the metric sequence.
const TEST_STAGE: usize = 4;

/// Per-stage minima of `d(T^{h_n}, P(T))` over the candidate family.
pub struct ChaconAnalysis {
    pub candidates: Vec<PolynomialInT>,
    pub stages: Vec<usize>,
    pub heights: Vec<i64>,
    /// `distances[s][c]`.
    pub distances: Vec<Vec<f64>>,
    pub argmin: Vec<usize>,
    pub minima: Vec<f64>,
    /// `d(T^{h_n + 1}, T·P(T))` for the argmin candidate at each stage.
    pub shifted: Vec<f64>,
}

/// Stage `n` is measured at time `h_n` on the realization of stage
/// `n + offset`.
pub fn chacon_analysis(
    stage_min: usize,
    stage_max: usize,
    offset: usize,
    terms: usize,
    min_exp: i64,
    max_exp: i64,
    parallel: bool,
) -> CliResult<ChaconAnalysis> {
    if stage_min == 0 || stage_min > stage_max {
        return Err(CliError::usage("need 1 <= stage_min <= stage_max"));
    }
    if offset == 0 {
        return Err(CliError::usage("offset must be positive"));
    }
    if min_exp > max_exp {
        return Err(CliError::usage("min_exp must not exceed max_exp"));
    }
    let spec = RankOneSpec::chacon(stage_max + offset)?;
    let heights = spec.heights()?;
    let candidates = convex_half_candidates(min_exp, max_exp);
    let stages: Vec<usize> = (stage_min..=stage_max).collect();
    let per_stage = crate::experiments::grid(parallel, stages.len(), |i| -> CliResult<(Vec<f64>, f64)> {
        let n = stages[i];
        let p = rank_one_build(&spec, n + offset)?;
        let tests = level_tests(&p, TEST_STAGE, terms);
        let h = heights[n - 1] as i64;
        let r = weak_limit_detect_levels(&p, &candidates, &[h], 0.0, &tests)?;
        let best = &candidates[r.argmin[0]];
        let shifted = weak_limit_detect_levels(&p, &[best.shifted(1)], &[h + 1], 0.0, &tests)?;
        Ok((r.table[0].clone(), shifted.table[0][0]))
    });
    let mut distances = Vec::new();
    let mut shifted = Vec::new();
    for r in per_stage {
        let (d, s) = r?;
        distances.push(d);
        shifted.push(s);
    }
    let argmin: Vec<usize> = distances
        .iter()
        .map(|row| (0..row.len()).fold(0, |b, i| if row[i] < row[b] { i } else { b }))
        .collect();
    let minima = distances.iter().zip(&argmin).map(|(row, &i)| row[i]).collect();
    Ok(ChaconAnalysis {
        candidates,
        heights: stages.iter().map(|&n| heights[n - 1] as i64).collect(),
        stages,
        distances,
        argmin,
        minima,
        shifted,
    })
}

pub(crate) fn analysis_from(cfg: &ExperimentConfig) -> CliResult<ChaconAnalysis> {
    chacon_analysis(
        cfg.usize("stage_min")?,
        cfg.usize("stage_max")?,
        cfg.usize("offset")?,
        cfg.usize("terms")?,
        cfg.i64_or("min_exp", -3)?,
        cfg.i64_or("max_exp", 3)?,
        cfg.parallel(),
    )
}

pub(crate) fn run(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let tol = cfg.positive("tol")?;
    let a = analysis_from(cfg)?;
    for (s, row) in a.distances.iter().enumerate() {
        for (c, d) in row.iter().enumerate() {
            report.row(a.heights[s], a.candidates[c].to_string(), *d);
        }
    }
    for (s, &n) in a.stages.iter().enumerate() {
        report.summary(format!("stage{n}.min"), a.minima[s]);
        report.note(format!("stage{n}.argmin"), a.candidates[a.argmin[s]].to_string());
    }
    let limit = &a.candidates[*a.argmin.last().expect("nonempty")];
    report.note("limit_polynomial", limit.to_string());
    let decreasing = a.minima.windows(2).all(|w| w[1] < w[0]);
    report.check("minimum_decreases", decreasing, format!("{:?}", a.minima));
    let k = a.argmin.len();
    let stable = k < 2 || a.argmin[k - 1] == a.argmin[k - 2];
    report.check("argmin_stabilizes", stable, format!("argmin indices {:?}", a.argmin));
    let last = *a.minima.last().expect("nonempty");
    report.check("final_below_tol", last < tol, format!("{last:.6e} < {tol:e}"));
    Ok(())
}
