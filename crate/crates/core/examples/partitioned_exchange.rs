// A 10-qubit state split over 32 ranks of 5 local qubits each. Gates on
// global qubits first swap them into a local slot, moving half the state.

use std::error::Error;

use varqsim::partitioned::{random_circuit, PartitionedState};
use varqsim::statevector::{SingleQubitGate, StateVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (n, m) = (10, 5);
    let mut monolithic = StateVector::zero(n)?;
    let mut split = PartitionedState::split(&monolithic, m)?;
    println!("{} ranks x {} amplitudes", split.num_ranks(), 1 << m);

    // qubit 2 is local, qubit 8 global
    split.apply_single_qubit(2, &SingleQubitGate::hadamard())?;
    println!("after local H: {:?}", split.stats());
    split.apply_single_qubit(8, &SingleQubitGate::hadamard())?;
    println!("after global H: {:?}", split.stats());
    assert_eq!(split.stats().amplitudes_exchanged, 1 << (n - 1));
    monolithic.hadamard(2)?;
    monolithic.hadamard(8)?;

    for op in random_circuit(n, 100, 2, 42) {
        op.apply(&mut monolithic)?;
        op.apply_partitioned(&mut split)?;
    }
    let diff = split.gather()?.max_abs_diff(&monolithic);
    let stats = split.stats();
    println!(
        "100 more gates: {} global applications, {} amplitudes moved, max deviation {diff:.1e}",
        stats.global_applications, stats.amplitudes_exchanged
    );
    println!("final qubit -> slot map: {:?}", split.qubit_map());
    assert!(diff < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
