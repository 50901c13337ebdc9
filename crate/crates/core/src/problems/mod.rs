//! Problem models: exact cover instances, Ising cost Hamiltonians and
//! Heisenberg spin models.

mod cover;
mod heisenberg;
pub mod io;
mod ising;

pub use cover::{random_cover_instance, CoverGenerator, ExactCoverInstance, PlantedCover};
pub use heisenberg::{heisenberg_ring, neel_state, Coupling, HeisenbergModel};
pub use ising::{GroundStates, IsingModel, BRUTE_FORCE_CAP};
