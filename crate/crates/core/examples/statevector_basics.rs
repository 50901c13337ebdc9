// Amplitudes, gates, Pauli rotations and measurement on a small register.

use std::error::Error;
use std::f64::consts::FRAC_PI_2;

use varqsim::statevector::{memory_estimate, Bitstring, Pauli, PauliString, StateVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // |+>|+>|+>: every outcome equally likely
    let mut psi = StateVector::plus(3)?;
    assert!(psi.probabilities().iter().all(|p| (p - 0.125).abs() < 1e-15));

    // exp(-i pi/2 X) on qubit 0 maps |0> to -i|1>
    let mut zero = StateVector::zero(1)?;
    zero.apply_pauli_rotation(&PauliString::single(1, 0, Pauli::X, 1.0)?, FRAC_PI_2)?;
    println!("exp(-i pi/2 X)|0> = {:?}", zero.amplitudes());

    // an entangling ZZ rotation keeps the norm
    psi.apply_pauli_rotation(&PauliString::zz(3, 0, 2, 1.0)?, 0.3)?;
    psi.hadamard(1)?;
    println!("norm after gates: {:.15}", psi.norm_sqr());

    let terms = [
        PauliString::zz(3, 0, 1, 1.0)?,
        PauliString::single(3, 2, Pauli::X, 0.5)?,
    ];
    println!("<Z0 Z1 + 0.5 X2> = {:.6}", psi.expectation(&terms)?);

    // bitstrings print most significant qubit first
    let target: Bitstring = "010".parse()?;
    println!("P({target}) = {:.4}", psi.probability_of(&[target.clone()])?);
    let counts = psi.sample(1000, 7);
    for (bits, n) in &counts {
        println!("  {bits}: {n}");
    }
    assert_eq!(counts.values().sum::<usize>(), 1000);

    println!("a 42-qubit state needs {} TiB", memory_estimate(42) >> 40);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
