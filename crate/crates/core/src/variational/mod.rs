//! QAOA and approximate quantum annealing (AQA) on Ising cost models.
//!
//! Both algorithms start from `|+>^N`, the ground state of the driver
//! `H_D = -sum_i X_i`, and alternate `exp(-i gamma H_C)` with
//! `exp(-i beta H_D)`. QAOA optimises the angles; AQA fixes them from an
//! annealing schedule.

mod anneal;
mod qaoa;

use serde::{Deserialize, Serialize};

pub use anneal::{
    aqa_evolve, aqa_gate_sequence, aqa_to_qaoa_angles, AngleConvention, AnnealConfig, Schedule,
};
pub use qaoa::{
    qaoa_circuit, qaoa_energy, qaoa_optimize, qaoa_state, success_probability, QaoaEvaluator,
    QaoaInit,
};

use crate::{Error, Result};

/// QAOA angles for depth `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaAngles {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl QaoaAngles {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() || betas.len() != gammas.len() {
            return Err(Error::invalid(format!(
                "need p >= 1 betas and gammas of equal length, got {} and {}",
                betas.len(),
                gammas.len()
            )));
        }
        Ok(Self { betas, gammas })
    }

    pub fn zeros(p: usize) -> Result<Self> {
        Self::new(vec![0.0; p], vec![0.0; p])
    }

    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// Optimiser layout: `[gamma_1..gamma_p, beta_1..beta_p]`.
    pub fn to_params(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn from_params(params: &[f64]) -> Result<Self> {
        if params.len() % 2 != 0 {
            return Err(Error::invalid("QAOA parameter vector must have even length"));
        }
        let (g, b) = params.split_at(params.len() / 2);
        Self::new(b.to_vec(), g.to_vec())
    }
}

/// Outcome of a QAOA optimisation or an AQA evolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationalRun {
    /// `<H_C>` without the model offset.
    pub final_energy: f64,
    /// `final_energy + offset`, the mean classical cost.
    pub mean_cost: f64,
    pub success_probability: f64,
    pub angles: QaoaAngles,
    pub evals: usize,
    /// Energy of every objective call, in call order.
    pub history: Vec<f64>,
}
