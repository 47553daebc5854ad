//! Dense operator algebra, the truncated WOT metric and semigroup checks.

mod checks;
mod map;
mod matrix;
mod polynomial;
mod wot;

pub use checks::{
    bistochastic_check, bistochastic_check_weighted, commutator_residual_maps, commutes_check,
    isometry_defect_witness, CommutationCheck, IsometryDefect,
};
pub(crate) use map::check_len as map_check_len;
pub use map::{LinearMap, PolynomialMap};
pub use matrix::{operator_algebra, AlgebraKind, Basis, OperatorMatrix, NORM_ITERATIONS};
pub use polynomial::{apply_polynomial, PolynomialInT};
pub use wot::{
    compress, compress_images, inner, left_composition_lipschitz, norm2, wot_distance,
    wot_distance_maps, Compression, WeightedVectorSequence, DEFAULT_TERMS,
};

/// Default tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Default tolerance for weak-limit detection.
pub const DETECTION_TOL: f64 = 1e-2;
