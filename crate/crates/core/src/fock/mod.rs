//! Symmetric Fock lifts, circulants and commutants.

mod commutant;
mod lift;
mod truncation;

pub use commutant::{circulant, circulant_defect, commutant_basis, span_residual, toeplitz_from_coeffs, NULL_SPACE_TOL};
pub use lift::{permanent, symmetric_lift, GradedOperator};
pub use truncation::{binomial, multiplicity_factorial, FockTruncation, MAX_BLOCK_DIM};
