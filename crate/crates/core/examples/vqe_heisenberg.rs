// Single-round VQE on a six-spin Heisenberg ring from the Neel state with
// all parameters zero, plus a few random restarts for comparison.

use std::error::Error;

use varqsim::eigensolver::ground_dense;
use varqsim::problems::{neel_state, HeisenbergModel};
use varqsim::statevector::StateVector;
use varqsim::vqe::{build_ansatz, random_theta, vqe_optimize, VqeOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 6;
    let model = HeisenbergModel::isotropic_ring(n)?;
    let e0 = ground_dense(&model.terms(), n)?.e0;
    let ansatz = build_ansatz(n)?;
    let neel = StateVector::basis(n, neel_state(n)?)?;
    println!("{} parameters, ground energy {e0:.8}", ansatz.num_params());

    let opts = VqeOptions::default();
    let r = vqe_optimize(&model, &ansatz, &vec![0.0; ansatz.num_params()], &neel, &opts)?;
    println!(
        "Neel start: {:.1} -> {:.8}, fidelity {:.6} ({} evaluations)",
        r.initial_energy,
        r.final_energy,
        r.fidelity(e0)?,
        r.evals
    );

    for seed in 0..3 {
        let theta = random_theta(ansatz.num_params(), seed);
        let r = vqe_optimize(&model, &ansatz, &theta, &neel, &opts)?;
        println!("random start {seed}: fidelity {:.6}", r.fidelity(e0)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
