//! Finite-dimensional laboratory for weak limits of operator powers.
//!
//! The crate builds concrete matrix models of Koopman operators (irrational
//! rotations, a folding involution, rank-one cutting-and-stacking maps),
//! multiplication operators on atomic spectral measures, positive Lamperti
//! isometries of `L^p`, and symmetric Fock lifts, and it measures how their
//! powers behave in a truncated weak-operator-topology metric.
//!
//! Module map:
//!
//! - [`operator`]: dense complex matrices, the truncated WOT metric,
//!   Laurent polynomials in an operator, and algebraic sanity checks.
//! - [`transformations`]: exact Koopman matrices of the catalogued maps.
//! - [`rigidity`]: continued fractions, `λ`-rigidity scans and weak-limit
//!   detection against candidate polynomials.
//! - [`kronecker`]: atomic spectral measures, character matching and the
//!   unimodular matching pipeline for multiplication operators.
//! - [`fock`]: symmetric tensor lifts, circulants and commutant extraction.
//! - [`lp`]: Lamperti operators, Rokhlin towers and approximate eigenvectors.

pub mod error;
pub mod fock;
pub mod kronecker;
pub mod lp;
pub mod operator;
pub mod random;
pub mod rigidity;
pub mod transformations;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use operator::{
    Basis, LinearMap, OperatorMatrix, PolynomialInT, WeightedVectorSequence,
};
