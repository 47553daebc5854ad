//! Atomic spectral measures, character matching and unimodular replacement
//! of multipliers.

mod matching;
mod measure;
mod pipeline;

pub use matching::{
    character_match, character_residual, lyapunov_match, CellPartition, LyapunovMatch, MultiplicationData,
};
pub use measure::{
    parse_fraction, symmetrize_measure, Angle, AtomicSpectralMeasure, IndependenceCertificate,
    INDEPENDENCE_SCAN_LIMIT,
};
pub use pipeline::{approximate_in_powers, pair_inner, power_discrepancies, PowerApproximation, TestPair};
