//! State-vector simulation of gate-based quantum computers together with the
//! hybrid quantum-classical loops that run on top of it.
//!
//! The crate is organised bottom-up:
//!
//! - [`statevector`]: dense amplitudes, single-qubit gates, Pauli-string
//!   rotations, diagonal phases, expectation values and sampling.
//! - [`partitioned`]: the same state split over `2^(N-M)` in-process ranks with
//!   global/local qubit relabelling and exchange accounting.
//! - [`problems`]: exact cover instances, Ising and Heisenberg models.
//! - [`eigensolver`]: dense and Lanczos reference ground states.
//! - [`optimizers`]: budgeted Nelder-Mead and BFGS.
//! - [`variational`]: QAOA and approximate quantum annealing (AQA).
//! - [`vqe`]: the Heisenberg VQE ansatz and quasi-dynamical evolution.
//! - [`cli`]: run configurations, result records and sweeps behind the
//!   `varqsim` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod cli;
pub mod eigensolver;
mod error;
pub mod optimizers;
pub mod partitioned;
pub mod problems;
pub mod statevector;
pub mod variational;
pub mod vqe;

pub use error::{Error, Result};
pub use num_complex::Complex64;
