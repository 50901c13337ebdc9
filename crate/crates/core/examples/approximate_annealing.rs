// Approximate quantum annealing: a deliberately coarse second-order
// product formula with large time steps and no parameter optimisation.

use std::error::Error;

use varqsim::problems::CoverGenerator;
use varqsim::variational::{aqa_evolve, success_probability, AnnealConfig, Schedule};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let models: Vec<_> = (0..5)
        .map(|seed| Ok(CoverGenerator::new(8, 8).generate(seed)?.instance.to_ising()))
        .collect::<Result<_, varqsim::Error>>()?;

    println!("{:>5} {:>3} {:>8} {:>10}", "tau", "n", "t_anneal", "mean P");
    for (tau, n) in [(0.1, 5), (0.4, 5), (0.8, 5), (0.8, 20), (0.1, 200)] {
        let cfg = AnnealConfig::new(tau, n, Schedule::Linear)?;
        let mut total = 0.0;
        for m in &models {
            total += success_probability(&aqa_evolve(m, &cfg)?, m)?;
        }
        println!("{tau:>5} {n:>3} {:>8.1} {:>10.4}", cfg.t_anneal(), total / models.len() as f64);
    }
    println!("random guess: {:.4}", 0.5f64.powi(8));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
