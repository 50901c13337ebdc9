// Nelder-Mead and BFGS under a hard evaluation budget. Gradient probes
// count against the budget as well.

use std::error::Error;

use varqsim::optimizers::{minimize_bfgs, minimize_simplex, BfgsOptions, Gradient, SimplexOptions};

fn rosenbrock(x: &[f64]) -> f64 {
    (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x0 = [-1.2, 1.0];
    for budget in [50, 200, 500] {
        let nm = minimize_simplex(rosenbrock, &x0, &SimplexOptions { max_evals: budget, ..Default::default() })?;
        let bfgs = minimize_bfgs(
            rosenbrock,
            Gradient::FiniteDifference,
            &x0,
            &BfgsOptions { max_evals: budget, ..Default::default() },
        )?;
        println!(
            "budget {budget:>3}: simplex {:.2e} ({} evals), bfgs {:.2e} ({} evals)",
            nm.best_value, nm.evals, bfgs.best_value, bfgs.evals
        );
        assert!(nm.evals <= budget && bfgs.evals <= budget);
    }

    // an analytic gradient is charged a fixed number of units per call
    let grad = |x: &[f64]| {
        vec![
            -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]),
            200.0 * (x[1] - x[0] * x[0]),
        ]
    };
    let r = minimize_bfgs(rosenbrock, Gradient::analytic(grad, 2), &x0, &BfgsOptions { max_evals: 500, ..Default::default() })?;
    println!("analytic gradient: {:.2e} at {:?} ({} units)", r.best_value, r.best_params, r.evals);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
