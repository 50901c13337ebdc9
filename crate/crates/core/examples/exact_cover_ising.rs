// Exact cover as an Ising model: the penalty `sum_f (sum_i A_if x_i - 1)^2`
// becomes fields, couplings and a constant offset.

use std::error::Error;

use varqsim::problems::io::format_cover;
use varqsim::problems::{CoverGenerator, ExactCoverInstance};
use varqsim::statevector::Bitstring;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // routes cover flights {0}, {1} and {0, 1}
    let inst = ExactCoverInstance::from_matrix(&[&[1, 0], &[0, 1], &[1, 1]])?;
    let model = inst.to_ising();
    println!("fields {:?}", model.fields());
    println!("couplings {:?}", model.couplings());
    println!("offset {}", model.offset());

    for q in 0..8 {
        let x = Bitstring::from_index(3, q)?;
        println!("x={x} cost={} ising+offset={}", inst.cost(&x)?, model.cost(&x)?);
    }
    let ground = model.ground_states()?;
    let names: Vec<String> = ground.states.iter().map(|b| b.to_string()).collect();
    println!("exact covers: {}", names.join(", "));
    // text is most significant qubit first: "011" selects routes 0 and 1
    assert_eq!(names, ["011", "100"]);

    let planted = CoverGenerator::new(8, 6).generate(1)?;
    println!("generated instance:\n{}", format_cover(&planted.instance));
    println!("planted cover {} costs {}", planted.planted, planted.instance.cost(&planted.planted)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
