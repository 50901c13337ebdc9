// Drives the command-line front end in-process: a JSON run record and a
// CSV sweep, both written atomically.

use std::error::Error;

use varqsim::cli::{run, RunRecord};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let record = dir.path().join("exact.json");
    let table = dir.path().join("sweep.csv");

    let code = run(["varqsim", "exact", "--size", "10", "-o", record.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rec = RunRecord::parse(&std::fs::read_to_string(&record)?)?;
    println!("exact: e0 = {} ({})", rec.result["e0"], rec.status);

    let code = run([
        "varqsim", "sweep", "--sizes", "4..6", "--algorithms", "aqa,qaoa", "--seed", "7",
        "-o", table.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    print!("{}", std::fs::read_to_string(&table)?);

    // bad flags exit with 2
    assert_eq!(run(["varqsim", "qaoa", "--p", "many"]), 2);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
