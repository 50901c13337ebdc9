//! Budgeted classical optimisers for the outer variational loop.
//!
//! Every objective call, including the probes made to estimate a gradient,
//! is charged to an [`ObjectiveBudget`]; an optimiser stops as soon as the
//! budget cannot pay for its next step.

mod bfgs;
mod simplex;

use serde::{Deserialize, Serialize};

pub use bfgs::{minimize_bfgs, BfgsOptions, Gradient};
pub use simplex::{minimize_simplex, SimplexOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObjectiveBudget {
    max_evals: usize,
    used: usize,
}

impl ObjectiveBudget {
    pub fn new(max_evals: usize) -> Self {
        Self { max_evals, used: 0 }
    }

    pub fn max_evals(&self) -> usize {
        self.max_evals
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.max_evals - self.used
    }

    /// Charges `n` evaluations if they fit.
    pub fn try_charge(&mut self, n: usize) -> bool {
        if n > self.remaining() {
            return false;
        }
        self.used += n;
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// Budget units consumed.
    pub evals: usize,
    pub converged: bool,
    /// `(evaluation index, value)` for every objective call, in call order.
    pub history: Vec<(usize, f64)>,
}

#[derive(Debug, thiserror::Error)]
pub enum OptError {
    #[error("objective returned {value} at evaluation {eval}")]
    NonFinite {
        value: f64,
        eval: usize,
        partial: Box<OptResult>,
    },
    #[error("invalid optimizer input: {0}")]
    Invalid(String),
}

impl OptError {
    /// Best-so-far state at the time of the failure, when there is one.
    pub fn partial(&self) -> Option<&OptResult> {
        match self {
            OptError::NonFinite { partial, .. } => Some(partial),
            OptError::Invalid(_) => None,
        }
    }
}

/// Which optimiser a driver should run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum OptimizerConfig {
    Simplex(SimplexOptions),
    Bfgs(BfgsOptions),
}

impl OptimizerConfig {
    pub fn max_evals(&self) -> usize {
        match self {
            OptimizerConfig::Simplex(o) => o.max_evals,
            OptimizerConfig::Bfgs(o) => o.max_evals,
        }
    }

    pub fn with_max_evals(mut self, n: usize) -> Self {
        match &mut self {
            OptimizerConfig::Simplex(o) => o.max_evals = n,
            OptimizerConfig::Bfgs(o) => o.max_evals = n,
        }
        self
    }

    /// Runs the configured method. `gradient` is only used by BFGS; without it
    /// BFGS falls back to central differences.
    pub fn minimize(
        &self,
        f: impl FnMut(&[f64]) -> f64,
        gradient: Option<Gradient<'_>>,
        x0: &[f64],
    ) -> Result<OptResult, OptError> {
        match self {
            OptimizerConfig::Simplex(o) => minimize_simplex(f, x0, o),
            OptimizerConfig::Bfgs(o) => {
                minimize_bfgs(f, gradient.unwrap_or(Gradient::FiniteDifference), x0, o)
            }
        }
    }
}

/// Wraps the objective with budget accounting, history and best tracking.
pub(crate) struct Tracker<F> {
    f: F,
    budget: ObjectiveBudget,
    history: Vec<(usize, f64)>,
    best_params: Vec<f64>,
    best_value: f64,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    pub(crate) fn new(f: F, max_evals: usize, x0: &[f64]) -> Result<Self, OptError> {
        if x0.is_empty() {
            return Err(OptError::Invalid("need at least one parameter".into()));
        }
        Ok(Self {
            f,
            budget: ObjectiveBudget::new(max_evals),
            history: Vec::new(),
            best_params: x0.to_vec(),
            best_value: f64::INFINITY,
        })
    }

    /// `Ok(None)` once the budget is exhausted.
    pub(crate) fn eval(&mut self, x: &[f64]) -> Result<Option<f64>, OptError> {
        if !self.budget.try_charge(1) {
            return Ok(None);
        }
        let v = (self.f)(x);
        let eval = self.budget.used() - 1;
        if !v.is_finite() {
            return Err(OptError::NonFinite {
                value: v,
                eval,
                partial: Box::new(self.snapshot(false)),
            });
        }
        self.history.push((eval, v));
        if v < self.best_value {
            self.best_value = v;
            self.best_params = x.to_vec();
        }
        Ok(Some(v))
    }

    pub(crate) fn charge(&mut self, n: usize) -> bool {
        self.budget.try_charge(n)
    }

    pub(crate) fn remaining(&self) -> usize {
        self.budget.remaining()
    }

    pub(crate) fn snapshot(&self, converged: bool) -> OptResult {
        OptResult {
            best_params: self.best_params.clone(),
            best_value: self.best_value,
            evals: self.budget.used(),
            converged,
            history: self.history.clone(),
        }
    }

    pub(crate) fn finish(self, converged: bool) -> OptResult {
        OptResult {
            best_params: self.best_params,
            best_value: self.best_value,
            evals: self.budget.used(),
            converged,
            history: self.history,
        }
    }
}
