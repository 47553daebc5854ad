mod chacon;
mod fock;
mod folding;
mod kronecker;
mod lamperti;
mod rigidity;
mod semigroup;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::CliResult;
use crate::report::ExperimentReport;

pub use chacon::{chacon_analysis, ChaconAnalysis};
pub use rigidity::{rotation_operator, RotationSetup};

/// Runs the configured experiment. The report's `passed` flag records the
/// declared thresholds; errors are reserved for invalid input and
/// numerical breakdown.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<ExperimentReport> {
    let mut report = ExperimentReport::new(cfg);
    match cfg.kind {
        ExperimentKind::RigidityScan => rigidity::run(cfg, &mut report)?,
        ExperimentKind::FoldingCoeffs => folding::run(cfg, &mut report)?,
        ExperimentKind::ChaconLimits => chacon::run(cfg, &mut report)?,
        ExperimentKind::KroneckerDemo => kronecker::run(cfg, &mut report)?,
        ExperimentKind::FockDemo => fock::run(cfg, &mut report)?,
        ExperimentKind::LampertiSpectrum => lamperti::run(cfg, &mut report)?,
        ExperimentKind::SemigroupSanity => semigroup::run(cfg, &mut report)?,
    }
    Ok(report)
}

/// Runs `f` over `0..count`, in parallel when asked. Results keep their
/// index order either way.
pub(crate) fn grid<T: Send>(parallel: bool, count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    if parallel {
        (0..count).into_par_iter().map(f).collect()
    } else {
        (0..count).map(f).collect()
    }
}
