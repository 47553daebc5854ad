//! Lamperti operators on atomic `L^p` spaces, Rokhlin towers and
//! approximate eigenvectors.

mod eigen;
mod lamperti;
mod map;
pub mod presets;
mod tower;

pub use eigen::{approx_eigenvector, invariant_density_check, DensityCheck, EigenApproximation};
pub use lamperti::{lamperti_apply, p_norm, pow_p, root_p, LampertiOperator};
pub use map::NonsingularMapSpec;
pub use tower::{rokhlin_tower_find, TowerSpec};
