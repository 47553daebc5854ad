//! Rigidity times and weak limits of powers.

mod cf;
mod detect;
mod levels;
mod scan;

pub use cf::{cf_denominators, cf_denominators_rational, CfDenominators};
pub use detect::{
    convex_half_candidates, distance_to_polynomial, distance_to_scalar, weak_limit_detect, LimitCandidateReport,
};
pub use levels::{level_sequence, level_tests, weak_limit_detect_levels, LevelCompressor, LevelSet};
pub use scan::{
    lambda_rigidity_scan, lambda_rigidity_scan_map, lambda_rigidity_scan_parallel, RigidityEntry, RigidityReport,
    REORTHO_INTERVAL,
};
