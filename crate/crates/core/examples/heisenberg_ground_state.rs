// Reference ground energies of isotropic Heisenberg rings: dense
// diagonalisation for small rings, matrix-free Lanczos beyond.

use std::error::Error;

use varqsim::eigensolver::{ground_dense, ground_lanczos, LanczosConfig};
use varqsim::problems::{neel_state, HeisenbergModel};
use varqsim::vqe::energy_fidelity;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in [4, 6, 8] {
        let model = HeisenbergModel::isotropic_ring(n)?;
        let dense = ground_dense(&model.terms(), n)?;
        let lanczos = ground_lanczos(&model.hamiltonian(), &LanczosConfig::default())?;
        println!(
            "N={n}: dense {:.10}  lanczos {:.10} ({} iterations, residual {:.1e})",
            dense.e0, lanczos.e0, lanczos.iterations, lanczos.residual
        );
        assert!((dense.e0 - lanczos.e0).abs() < 1e-8);
    }

    let n = 12;
    let model = HeisenbergModel::isotropic_ring(n)?;
    let r = ground_lanczos(&model.hamiltonian(), &LanczosConfig::default())?;
    let neel = model.basis_energy(&neel_state(n)?)?;
    println!("N={n}: e0 = {:.8}, Neel energy {neel}, fidelity {:.4}", r.e0, energy_fidelity(neel, r.e0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
