//! VQE for Heisenberg models with a pairwise `Y X (Z)` ansatz, plus
//! quasi-dynamical evolution: repeated rounds in which each optimised state
//! becomes the next round's reference and the parameters restart at zero.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::optimizers::{BfgsOptions, Gradient, OptimizerConfig};
use crate::problems::HeisenbergModel;
use crate::statevector::circuit::ParametricCircuit;
use crate::statevector::{Pauli, PauliString, PauliSum, StateVector};
use crate::{Error, Result};

/// Default objective budget per optimisation round.
pub const VQE_MAX_EVALS: usize = 10_000;

/// Budget units charged for one adjoint gradient (a forward and a reverse sweep).
pub const ADJOINT_GRADIENT_COST: usize = 2;

/// Product of `exp(-i theta_j G_j)` over the pair generators
/// `G = Y_p X_q` (or `Y_p X_q Z_last` when neither `p` nor `q` is the last
/// spin). With 1-based labels, the `(k, l)` block acts first for
/// `l = 1..N-1`, `k = l+1..N`, then the `(l, k)` block in the same order.
/// Parameter `j` belongs to the `j`-th gate applied.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    circuit: ParametricCircuit,
}

impl Ansatz {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits < 2 {
            return Err(Error::invalid("the ansatz needs at least two qubits"));
        }
        let n = num_qubits;
        let last = n - 1;
        let pair = |p: usize, q: usize| {
            let mut f = vec![(p, Pauli::Y), (q, Pauli::X)];
            if p != last && q != last {
                f.push((last, Pauli::Z));
            }
            PauliString::new(n, f, 1.0)
        };
        let mut order = Vec::with_capacity(n * (n - 1));
        for swap in [false, true] {
            for l in 0..n - 1 {
                for k in l + 1..n {
                    order.push(if swap { (l, k) } else { (k, l) });
                }
            }
        }
        let mut circuit = ParametricCircuit::new(n, order.len());
        for (j, (p, q)) in order.into_iter().enumerate() {
            circuit.push(pair(p, q)?, j)?;
        }
        Ok(Self { circuit })
    }

    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    pub fn num_params(&self) -> usize {
        self.circuit.num_params()
    }

    pub fn circuit(&self) -> &ParametricCircuit {
        &self.circuit
    }

    pub fn prepare(&self, initial: &StateVector, theta: &[f64]) -> Result<StateVector> {
        self.circuit.prepare(initial, theta)
    }
}

pub fn build_ansatz(num_qubits: usize) -> Result<Ansatz> {
    Ansatz::new(num_qubits)
}

/// `theta` drawn uniformly from `[-pi, pi)` per coordinate.
pub fn random_theta(num_params: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_params).map(|_| rng.random_range(-PI..PI)).collect()
}

/// `<psi|H|psi>` with `psi = U(theta) |initial>`.
pub fn vqe_energy(
    model: &HeisenbergModel,
    ansatz: &Ansatz,
    theta: &[f64],
    initial: &StateVector,
) -> Result<f64> {
    check_sizes(model, ansatz, initial)?;
    ansatz.circuit.energy(initial, theta, &model.hamiltonian())
}

/// `e_var / e0`. Rejects `e0 >= 0` and ratios above one, which would mean a
/// variational energy below the ground energy.
pub fn energy_fidelity(e_var: f64, e0: f64) -> Result<f64> {
    if e0 >= 0.0 || !e0.is_finite() || !e_var.is_finite() {
        return Err(Error::invalid(format!(
            "energy fidelity needs a negative ground energy, got e0 = {e0}"
        )));
    }
    let f = e_var / e0;
    if f > 1.0 + 1e-9 {
        return Err(Error::invalid(format!(
            "variational energy {e_var} lies below the ground energy {e0}"
        )));
    }
    Ok(f.min(1.0))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    /// Reverse-mode sweep through the circuit, charged
    /// [`ADJOINT_GRADIENT_COST`] budget units.
    #[default]
    Adjoint,
    FiniteDifference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeOptions {
    pub optimizer: OptimizerConfig,
    pub gradient: GradientMode,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::Bfgs(BfgsOptions {
                max_evals: VQE_MAX_EVALS,
                ..Default::default()
            }),
            gradient: GradientMode::Adjoint,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiConfig {
    /// A round improving the energy by less than this ends the evolution.
    pub improvement_threshold: f64,
    pub max_rounds: usize,
}

impl Default for QuasiConfig {
    fn default() -> Self {
        Self {
            improvement_threshold: 1e-4,
            max_rounds: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub initial_energy: f64,
    pub final_energy: f64,
    pub rounds: usize,
    pub per_round_energies: Vec<f64>,
    pub params_per_round: Vec<Vec<f64>>,
    /// Budget units used over all rounds.
    pub evals: usize,
    /// Whether the optimiser of every round reported convergence.
    pub converged: bool,
}

impl VqeResult {
    pub fn fidelity(&self, e0: f64) -> Result<f64> {
        energy_fidelity(self.final_energy, e0)
    }
}

fn check_sizes(model: &HeisenbergModel, ansatz: &Ansatz, initial: &StateVector) -> Result<()> {
    let n = model.num_spins();
    if ansatz.num_qubits() != n || initial.num_qubits() != n {
        return Err(Error::invalid(format!(
            "model has {n} spins, ansatz {} qubits, state {} qubits",
            ansatz.num_qubits(),
            initial.num_qubits()
        )));
    }
    Ok(())
}

struct Round {
    energy: f64,
    params: Vec<f64>,
    evals: usize,
    converged: bool,
}

fn optimize_round(
    h: &PauliSum,
    ansatz: &Ansatz,
    theta0: &[f64],
    initial: &StateVector,
    opts: &VqeOptions,
) -> Result<Round> {
    if theta0.len() != ansatz.num_params() {
        return Err(Error::invalid(format!(
            "expected {} parameters, got {}",
            ansatz.num_params(),
            theta0.len()
        )));
    }
    let c = &ansatz.circuit;
    let objective = |x: &[f64]| c.energy(initial, x, h).unwrap_or(f64::NAN);
    let gradient = match opts.gradient {
        GradientMode::Adjoint => Some(Gradient::analytic(
            |x: &[f64]| {
                c.adjoint_gradient(initial, x, h)
                    .map(|(_, g)| g)
                    .unwrap_or_else(|_| vec![f64::NAN; x.len()])
            },
            ADJOINT_GRADIENT_COST,
        )),
        GradientMode::FiniteDifference => None,
    };
    let res = opts.optimizer.minimize(objective, gradient, theta0)?;
    Ok(Round {
        energy: res.best_value,
        params: res.best_params,
        evals: res.evals,
        converged: res.converged,
    })
}

/// One optimisation of `theta` starting from `theta0`.
pub fn vqe_optimize(
    model: &HeisenbergModel,
    ansatz: &Ansatz,
    theta0: &[f64],
    initial: &StateVector,
    opts: &VqeOptions,
) -> Result<VqeResult> {
    check_sizes(model, ansatz, initial)?;
    let h = model.hamiltonian();
    let initial_energy = ansatz.circuit.energy(initial, theta0, &h)?;
    let r = optimize_round(&h, ansatz, theta0, initial, opts)?;
    Ok(VqeResult {
        initial_energy,
        final_energy: r.energy,
        rounds: 1,
        per_round_energies: vec![r.energy],
        params_per_round: vec![r.params],
        evals: r.evals,
        converged: r.converged,
    })
}

/// Rounds of [`vqe_optimize`] from `theta = 0`, each acting on the previous
/// round's optimised state. Stops once a round improves the energy by less
/// than the threshold (that round is kept) or after `max_rounds`.
pub fn quasi_dynamics(
    model: &HeisenbergModel,
    ansatz: &Ansatz,
    initial: &StateVector,
    cfg: &QuasiConfig,
    opts: &VqeOptions,
) -> Result<VqeResult> {
    let zeros = vec![0.0; ansatz.num_params()];
    quasi_dynamics_from(model, ansatz, initial, &zeros, cfg, opts)
}

/// As [`quasi_dynamics`], but the first round starts from `theta0`.
pub fn quasi_dynamics_from(
    model: &HeisenbergModel,
    ansatz: &Ansatz,
    initial: &StateVector,
    theta0: &[f64],
    cfg: &QuasiConfig,
    opts: &VqeOptions,
) -> Result<VqeResult> {
    if !(cfg.improvement_threshold > 0.0) || cfg.max_rounds == 0 {
        return Err(Error::invalid("need threshold > 0 and max_rounds >= 1"));
    }
    check_sizes(model, ansatz, initial)?;
    let h = model.hamiltonian();
    let zeros = vec![0.0; ansatz.num_params()];
    let mut state = initial.clone();
    let initial_energy = ansatz.circuit.energy(initial, theta0, &h)?;
    let mut out = VqeResult {
        initial_energy,
        final_energy: initial_energy,
        rounds: 0,
        per_round_energies: Vec::new(),
        params_per_round: Vec::new(),
        evals: 0,
        converged: true,
    };
    let mut previous = initial_energy;
    for round in 0..cfg.max_rounds {
        let start = if round == 0 { theta0 } else { &zeros };
        let r = optimize_round(&h, ansatz, start, &state, opts)?;
        ansatz.circuit.apply(&mut state, &r.params)?;
        out.rounds += 1;
        out.evals += r.evals;
        out.converged &= r.converged;
        out.final_energy = r.energy;
        out.per_round_energies.push(r.energy);
        out.params_per_round.push(r.params);
        let improvement = previous - r.energy;
        previous = r.energy;
        if improvement < cfg.improvement_threshold {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::neel_state;

    #[test]
    fn ansatz_shape() {
        let a = build_ansatz(2).unwrap();
        let g = a.circuit().gates();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].generator.factors(), &[(0, Pauli::X), (1, Pauli::Y)]);
        assert_eq!(g[1].generator.factors(), &[(0, Pauli::Y), (1, Pauli::X)]);
        assert!(g.iter().all(|g| g.generator.factors().len() == 2));

        let a = build_ansatz(3).unwrap();
        assert_eq!(a.num_params(), 6);
        // (2,1) in 1-based labels is the only pair without the last spin
        let g = &a.circuit().gates()[0].generator;
        assert_eq!(g.factors(), &[(0, Pauli::X), (1, Pauli::Y), (2, Pauli::Z)]);
        assert_eq!(build_ansatz(7).unwrap().num_params(), 42);
        assert!(build_ansatz(1).is_err());
    }

    #[test]
    fn zero_parameters_are_identity() {
        let m = HeisenbergModel::isotropic_ring(6).unwrap();
        let a = build_ansatz(6).unwrap();
        let neel = StateVector::basis(6, neel_state(6).unwrap()).unwrap();
        let e = vqe_energy(&m, &a, &vec![0.0; a.num_params()], &neel).unwrap();
        assert!((e + 6.0).abs() < 1e-12);
    }

    #[test]
    fn two_spins_reach_the_singlet() {
        let m = HeisenbergModel::isotropic_ring(2).unwrap();
        let a = build_ansatz(2).unwrap();
        let neel = StateVector::basis(2, neel_state(2).unwrap()).unwrap();
        let r = vqe_optimize(&m, &a, &[0.0, 0.0], &neel, &VqeOptions::default()).unwrap();
        assert!((r.final_energy + 3.0).abs() < 1e-6, "{}", r.final_energy);
        assert!((r.fidelity(-3.0).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quasi_rounds_never_increase_energy() {
        let m = HeisenbergModel::isotropic_ring(4).unwrap();
        let a = build_ansatz(4).unwrap();
        let neel = StateVector::basis(4, neel_state(4).unwrap()).unwrap();
        let opts = VqeOptions::default();
        let q = quasi_dynamics(&m, &a, &neel, &QuasiConfig::default(), &opts).unwrap();
        let single = vqe_optimize(&m, &a, &vec![0.0; 12], &neel, &opts).unwrap();
        assert_eq!(q.per_round_energies[0], single.final_energy);
        assert!(q.per_round_energies.windows(2).all(|w| w[1] <= w[0]));
        assert!(q.final_energy >= -8.0 - 1e-9);
    }

    #[test]
    fn fidelity_checks() {
        assert_eq!(energy_fidelity(-2.0, -2.0).unwrap(), 1.0);
        assert!((energy_fidelity(-12.0, -21.54956364).unwrap() - 0.5568558).abs() < 1e-7);
        assert!(energy_fidelity(-1.0, 0.0).is_err());
        assert!(energy_fidelity(-3.0, -2.0).is_err());
    }
}
