use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{aqa_to_qaoa_angles, AngleConvention, AnnealConfig, QaoaAngles, VariationalRun};
use crate::optimizers::OptimizerConfig;
use crate::problems::IsingModel;
use crate::statevector::circuit::ParametricCircuit;
use crate::statevector::{Pauli, PauliString, SingleQubitGate, StateVector};
use crate::{Error, Result};

/// `exp(-i beta H_D)` with `H_D = -sum_j X_j`, i.e. `R^x(-2 beta)` on every qubit.
pub(crate) fn mix(state: &mut StateVector, beta: f64) {
    let gate = SingleQubitGate::rx(-2.0 * beta);
    for j in 0..state.num_qubits() {
        state.apply_single_qubit(j, &gate).expect("qubit in range");
    }
}

/// Caches the cost diagonal so repeated energy evaluations only pay for the
/// `2p` layers.
#[derive(Clone, Debug)]
pub struct QaoaEvaluator {
    num_qubits: usize,
    diag: Vec<f64>,
}

impl QaoaEvaluator {
    pub fn new(model: &IsingModel) -> Result<Self> {
        Ok(Self {
            num_qubits: model.num_qubits(),
            diag: model.diagonal()?,
        })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn state(&self, angles: &QaoaAngles) -> Result<StateVector> {
        let mut s = StateVector::plus(self.num_qubits)?;
        for (&beta, &gamma) in angles.betas().iter().zip(angles.gammas()) {
            s.apply_diagonal_values(&self.diag, gamma)?;
            mix(&mut s, beta);
        }
        Ok(s)
    }

    pub fn energy(&self, angles: &QaoaAngles) -> Result<f64> {
        Ok(self.state(angles)?.expectation_diagonal(&self.diag))
    }
}

/// `prod_k exp(-i beta_k H_D) exp(-i gamma_k H_C) |+>^N`, layer 1 acting first.
pub fn qaoa_state(model: &IsingModel, angles: &QaoaAngles) -> Result<StateVector> {
    QaoaEvaluator::new(model)?.state(angles)
}

/// `<H_C>` in the QAOA state, offset excluded.
pub fn qaoa_energy(model: &IsingModel, angles: &QaoaAngles) -> Result<f64> {
    QaoaEvaluator::new(model)?.energy(angles)
}

/// Gate-level QAOA circuit acting on `|+>^N`: per layer one `Z` or `ZZ`
/// rotation per nonzero Ising term, then one `X` rotation per qubit.
/// Parameters follow [`QaoaAngles::to_params`].
pub fn qaoa_circuit(model: &IsingModel, p: usize) -> Result<ParametricCircuit> {
    let n = model.num_qubits();
    let mut c = ParametricCircuit::new(n, 2 * p);
    for k in 0..p {
        for t in model.terms() {
            c.push(t, k)?;
        }
        for j in 0..n {
            c.push(PauliString::single(n, j, Pauli::X, -1.0)?, p + k)?;
        }
    }
    Ok(c)
}

/// Probability mass on every minimiser of `model`.
pub fn success_probability(state: &StateVector, model: &IsingModel) -> Result<f64> {
    let ground = model.ground_states()?;
    state.probability_of(&ground.states)
}

/// Where the optimiser starts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QaoaInit {
    /// Angles read off an annealing schedule with `p = n + 1`.
    Aqa {
        anneal: AnnealConfig,
        convention: AngleConvention,
    },
    /// `beta_k` uniform in `[0, pi/2)`, `gamma_k` uniform in `[0, pi)`.
    Random { p: usize, seed: u64 },
    Given(QaoaAngles),
}

impl QaoaInit {
    pub fn angles(&self) -> Result<QaoaAngles> {
        match self {
            QaoaInit::Aqa { anneal, convention } => aqa_to_qaoa_angles(anneal, *convention),
            QaoaInit::Random { p, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let betas = (0..*p)
                    .map(|_| rng.random_range(0.0..std::f64::consts::FRAC_PI_2))
                    .collect();
                let gammas = (0..*p)
                    .map(|_| rng.random_range(0.0..std::f64::consts::PI))
                    .collect();
                QaoaAngles::new(betas, gammas)
            }
            QaoaInit::Given(a) => Ok(a.clone()),
        }
    }
}

/// Minimises the QAOA energy from `init`; the success probability is only
/// measured on the final state.
///
/// The evaluation budget is the optimiser's `max_evals`. An aborted
/// optimisation surfaces as [`Error::Optimizer`] carrying the best point so far.
pub fn qaoa_optimize(
    model: &IsingModel,
    init: &QaoaAngles,
    optimizer: &OptimizerConfig,
) -> Result<VariationalRun> {
    let ev = QaoaEvaluator::new(model)?;
    let objective = |x: &[f64]| match QaoaAngles::from_params(x) {
        Ok(a) => ev.energy(&a).unwrap_or(f64::NAN),
        Err(_) => f64::NAN,
    };
    let res = optimizer.minimize(objective, None, &init.to_params())?;
    let angles = QaoaAngles::from_params(&res.best_params)?;
    let state = ev.state(&angles)?;
    let energy = state.expectation_diagonal(ev.diagonal());
    if (energy - res.best_value).abs() > 1e-9 * (1.0 + energy.abs()) {
        return Err(Error::invalid("re-evaluated energy differs from optimiser value"));
    }
    Ok(VariationalRun {
        final_energy: energy,
        mean_cost: energy + model.offset(),
        success_probability: success_probability(&state, model)?,
        angles,
        evals: res.evals,
        history: res.history.into_iter().map(|(_, v)| v).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizers::SimplexOptions;
    use crate::problems::ExactCoverInstance;

    fn single_field() -> IsingModel {
        IsingModel::new(vec![1.0], [], 0.0).unwrap()
    }

    #[test]
    fn zero_angles_keep_plus_state() {
        let m = IsingModel::new(vec![0.3, -1.0, 0.5], [((0, 2), 2.0), ((1, 2), -0.7)], 4.0).unwrap();
        let a = QaoaAngles::zeros(3).unwrap();
        let s = qaoa_state(&m, &a).unwrap();
        assert!(s.max_abs_diff(&StateVector::plus(3).unwrap()) < 1e-15);
        assert!(qaoa_energy(&m, &a).unwrap().abs() < 1e-14);
    }

    #[test]
    fn one_qubit_reaches_ground_state() {
        // gamma = pi/4 turns |+> into a Y eigenstate, which the mixer then
        // rotates onto |1>
        let m = single_field();
        let a = QaoaAngles::new(vec![std::f64::consts::FRAC_PI_4], vec![std::f64::consts::FRAC_PI_4]).unwrap();
        let s = qaoa_state(&m, &a).unwrap();
        let e = qaoa_energy(&m, &a).unwrap();
        assert!((e + 1.0).abs() < 1e-12, "{e}");
        assert!((success_probability(&s, &m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gate_circuit_matches_diagonal_path() {
        let m = IsingModel::new(vec![0.3, -1.0, 0.5, 0.0], [((0, 2), 2.0), ((1, 3), -0.7)], 1.0).unwrap();
        let a = QaoaAngles::new(vec![0.4, -0.2], vec![1.1, 0.6]).unwrap();
        let c = qaoa_circuit(&m, 2).unwrap();
        let gates = c.prepare(&StateVector::plus(4).unwrap(), &a.to_params()).unwrap();
        assert!(gates.max_abs_diff(&qaoa_state(&m, &a).unwrap()) < 1e-13);
        // 3 fields + 2 couplings + 4 mixers per layer
        assert_eq!(c.gate_counts(), (2 * 7, 2 * 2));
    }

    #[test]
    fn optimisation_on_small_cover() {
        let inst = ExactCoverInstance::from_matrix(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let m = inst.to_ising();
        let init = QaoaInit::Random { p: 3, seed: 5 }.angles().unwrap();
        let opt = OptimizerConfig::Simplex(SimplexOptions::default());
        let start = qaoa_energy(&m, &init).unwrap();
        let run = qaoa_optimize(&m, &init, &opt).unwrap();
        assert!(run.evals <= 200);
        assert!(run.final_energy <= start);
        assert_eq!(run.history.len(), run.evals);
        assert!((0.0..=1.0).contains(&run.success_probability));
    }

    #[test]
    fn params_round_trip() {
        let a = QaoaAngles::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(a.to_params(), vec![3.0, 4.0, 1.0, 2.0]);
        assert_eq!(QaoaAngles::from_params(&a.to_params()).unwrap(), a);
        assert!(QaoaAngles::new(vec![1.0], vec![]).is_err());
        assert!(QaoaAngles::from_params(&[1.0]).is_err());
    }
}
