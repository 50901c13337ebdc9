//! Reference ground states: dense diagonalisation for small systems and a
//! matrix-free Lanczos iteration beyond that.

mod dense;
mod lanczos;

pub use dense::{dense_matrix, ground_dense, DENSE_CAP};
pub use lanczos::{ground_lanczos, LanczosConfig, DEFAULT_BASIS_BYTES};

use crate::statevector::StateVector;

#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Lowest eigenvalue (or its current Ritz estimate).
    pub e0: f64,
    pub vector: Option<StateVector>,
    /// Operator applications performed.
    pub iterations: usize,
    /// `||H v - e0 v|| / ||v||`, zero when no vector is available.
    pub residual: f64,
    /// The next eigenvalue estimate lies within `1e-6 (1 + |e0|)` of `e0`.
    pub near_degenerate: bool,
}
