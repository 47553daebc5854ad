//! Concrete transformations and their Koopman matrices.

mod folding;
mod permutation;
pub mod quadrature;
mod rank_one;
mod restrict;
mod rotation;

pub use folding::{
    closed_form_f1, closed_form_f2, folding_coefficient, folding_indicator_koopman, folding_interval_permutation,
    folding_koopman, nonzero_indices, quadrature_coefficient, FoldingMapSpec, FOLDING_QUAD_TOL,
};
pub use permutation::{
    cyclic_shift, koopman_of_permutation, CycleTable, IntervalPermutation, PermutationKoopman,
};
pub(crate) use permutation::{check_bijection, exact_total};
pub use rank_one::{rank_one_build, RankOneSpec};
pub use restrict::{mean_zero_restrict, mean_zero_restrict_with, reassemble_with_constants};
pub use rotation::{fourier_index, fourier_mode, fourier_modes, rotation_eigenvalue, rotation_koopman, RotationSpec};
