use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::qaoa::mix;
use super::QaoaAngles;
use crate::problems::IsingModel;
use crate::statevector::{Pauli, PauliString, StateVector};
use crate::{Error, Result};

/// Annealing functions `A(t), B(t)` on the normalised time `s = t / t_anneal`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// `A = 1 - s`, `B = s`.
    #[default]
    Linear,
    /// `A = cos^2(pi s / 2)`, `B = sin^2(pi s / 2)`.
    Sinusoidal,
}

impl Schedule {
    pub fn driver(self, s: f64) -> f64 {
        match self {
            Schedule::Linear => 1.0 - s,
            Schedule::Sinusoidal => (FRAC_PI_2 * s).cos().powi(2),
        }
    }

    pub fn cost(self, s: f64) -> f64 {
        match self {
            Schedule::Linear => s,
            Schedule::Sinusoidal => (FRAC_PI_2 * s).sin().powi(2),
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Schedule::Linear),
            "sinusoidal" | "sin" => Ok(Schedule::Sinusoidal),
            _ => Err(Error::invalid(format!("unknown schedule {s:?}"))),
        }
    }
}

/// `n + 1` symmetric Trotter steps of length `tau`; `t_anneal = (n + 1) tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub tau: f64,
    pub n: usize,
    pub schedule: Schedule,
}

impl AnnealConfig {
    pub fn new(tau: f64, n: usize, schedule: Schedule) -> Result<Self> {
        let cfg = Self { tau, n, schedule };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::invalid(format!("tau must be positive, got {}", self.tau)));
        }
        Ok(())
    }

    pub fn t_anneal(&self) -> f64 {
        (self.n + 1) as f64 * self.tau
    }

    /// `A(l tau)`.
    pub fn driver_at(&self, l: usize) -> f64 {
        self.schedule.driver(l as f64 * self.tau / self.t_anneal())
    }

    /// `B(l tau)`.
    pub fn cost_at(&self, l: usize) -> f64 {
        self.schedule.cost(l as f64 * self.tau / self.t_anneal())
    }
}

/// How the two driver half-steps of every Trotter step become QAOA angles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleConvention {
    /// `beta_k = tau A((k-1) tau)`, `gamma_k = tau B((k-1) tau)`.
    #[default]
    LeftPoint,
    /// The trailing half-step of step `l` is merged with the leading
    /// half-step of step `l + 1`: `beta_k = tau (A_{k-1} + A_k) / 2` for
    /// `k <= n` and `beta_{n+1} = tau A_n / 2`. The leading half-step of step
    /// 0 only multiplies `|+>^N` by a phase, so the QAOA state equals the AQA
    /// state up to `exp(i tau A_0 N / 2)`.
    MergedHalfSteps,
}

impl FromStr for AngleConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left-point" | "left" => Ok(AngleConvention::LeftPoint),
            "merged" | "merged-half-steps" => Ok(AngleConvention::MergedHalfSteps),
            _ => Err(Error::invalid(format!("unknown angle convention {s:?}"))),
        }
    }
}

pub fn aqa_to_qaoa_angles(cfg: &AnnealConfig, convention: AngleConvention) -> Result<QaoaAngles> {
    cfg.validate()?;
    let (tau, n) = (cfg.tau, cfg.n);
    let gammas = (0..=n).map(|l| tau * cfg.cost_at(l)).collect();
    let betas = match convention {
        AngleConvention::LeftPoint => (0..=n).map(|l| tau * cfg.driver_at(l)).collect(),
        AngleConvention::MergedHalfSteps => (0..=n)
            .map(|l| {
                let next = if l < n { cfg.driver_at(l + 1) } else { 0.0 };
                0.5 * tau * (cfg.driver_at(l) + next)
            })
            .collect(),
    };
    QaoaAngles::new(betas, gammas)
}

/// Second-order product formula from `|+>^N`:
/// `prod_l exp(-i tau/2 A_l H_D) exp(-i tau B_l H_C) exp(-i tau/2 A_l H_D)`.
pub fn aqa_evolve(model: &IsingModel, cfg: &AnnealConfig) -> Result<StateVector> {
    cfg.validate()?;
    let diag = model.diagonal()?;
    let mut s = StateVector::plus(model.num_qubits())?;
    for l in 0..=cfg.n {
        let half = 0.5 * cfg.tau * cfg.driver_at(l);
        mix(&mut s, half);
        s.apply_diagonal_values(&diag, cfg.tau * cfg.cost_at(l))?;
        mix(&mut s, half);
    }
    Ok(s)
}

/// The AQA circuit as `(generator, theta)` rotations `exp(-i theta P)`, with
/// adjacent driver half-steps merged and the leading half-step dropped as a
/// global phase on `|+>^N`.
pub fn aqa_gate_sequence(model: &IsingModel, cfg: &AnnealConfig) -> Result<Vec<(PauliString, f64)>> {
    let angles = aqa_to_qaoa_angles(cfg, AngleConvention::MergedHalfSteps)?;
    let n = model.num_qubits();
    let terms = model.terms();
    let mut seq = Vec::new();
    for (&beta, &gamma) in angles.betas().iter().zip(angles.gammas()) {
        seq.extend(terms.iter().map(|t| (t.clone(), gamma)));
        for j in 0..n {
            seq.push((PauliString::single(n, j, Pauli::X, -1.0)?, beta));
        }
    }
    Ok(seq)
}
