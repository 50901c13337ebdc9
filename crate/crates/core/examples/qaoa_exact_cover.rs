// QAOA on a planted exact cover instance, started from annealing angles and
// optimised within 200 energy evaluations.

use std::error::Error;

use varqsim::optimizers::{OptimizerConfig, SimplexOptions};
use varqsim::problems::CoverGenerator;
use varqsim::statevector::StateVector;
use varqsim::variational::{
    aqa_to_qaoa_angles, qaoa_optimize, qaoa_state, success_probability, AngleConvention,
    AnnealConfig, Schedule,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 8;
    let planted = CoverGenerator::new(n, n).generate(3)?;
    let model = planted.instance.to_ising();

    // p = 5 layers read off an anneal with tau = 0.4
    let init = aqa_to_qaoa_angles(&AnnealConfig::new(0.4, 4, Schedule::Linear)?, AngleConvention::LeftPoint)?;
    let p_init = success_probability(&qaoa_state(&model, &init)?, &model)?;
    let p_guess = success_probability(&StateVector::plus(n)?, &model)?;

    let opt = OptimizerConfig::Simplex(SimplexOptions { max_evals: 200, ..Default::default() });
    let run = qaoa_optimize(&model, &init, &opt)?;
    println!("random guess P = {p_guess:.4}");
    println!("annealing angles P = {p_init:.4}");
    println!(
        "optimised P = {:.4}, <C> = {:.4} after {} evaluations",
        run.success_probability, run.mean_cost, run.evals
    );
    println!("gammas {:?}", run.angles.gammas());
    println!("betas  {:?}", run.angles.betas());
    assert!(run.evals <= 200);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
