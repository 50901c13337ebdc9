// Quasi-dynamical evolution: each VQE round starts from the previous
// round's optimised state with the parameters reset to zero.

use std::error::Error;

use varqsim::eigensolver::ground_dense;
use varqsim::problems::{neel_state, HeisenbergModel};
use varqsim::statevector::StateVector;
use varqsim::vqe::{build_ansatz, quasi_dynamics, QuasiConfig, VqeOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 7;
    let model = HeisenbergModel::isotropic_ring(n)?;
    let e0 = ground_dense(&model.terms(), n)?.e0;
    let ansatz = build_ansatz(n)?;
    let neel = StateVector::basis(n, neel_state(n)?)?;

    let r = quasi_dynamics(&model, &ansatz, &neel, &QuasiConfig::default(), &VqeOptions::default())?;
    for (round, e) in r.per_round_energies.iter().enumerate() {
        println!("round {:>2}: energy {e:.8}, fidelity {:.6}", round + 1, e / e0);
    }
    println!("{} rounds, {} evaluations in total", r.rounds, r.evals);
    assert!(r.per_round_energies.windows(2).all(|w| w[1] <= w[0]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
