use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::commands::{reference_energy, QAOA_BUDGET};
use super::{write_atomic, SCHEMA_VERSION};
use crate::optimizers::{OptimizerConfig, SimplexOptions};
use crate::problems::{neel_state, CoverGenerator, HeisenbergModel};
use crate::statevector::StateVector;
use crate::variational::{
    aqa_evolve, aqa_to_qaoa_angles, qaoa_optimize, success_probability, AngleConvention,
    AnnealConfig, Schedule,
};
use crate::vqe::{build_ansatz, quasi_dynamics, vqe_optimize, QuasiConfig, VqeOptions};
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Aqa,
    Qaoa,
    Quasi,
    Vqe,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Aqa => "aqa",
            Algorithm::Qaoa => "qaoa",
            Algorithm::Quasi => "quasi",
            Algorithm::Vqe => "vqe",
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepArgs {
    /// Sizes as `lo..hi` (inclusive) or a comma list; empty for none.
    #[arg(long, default_value = "", value_parser = parse_sizes)]
    pub sizes: Sizes,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algorithm::Vqe, Algorithm::Quasi])]
    pub algorithms: Vec<Algorithm>,
    /// Independent replicates per (size, algorithm).
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; defaults to the rayon pool size.
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// Flights per route of generated cover instances.
    #[arg(long, default_value_t = 1.0)]
    pub flights_per_route: f64,
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    /// Time step of the annealing schedule that seeds QAOA.
    #[arg(long, default_value_t = 0.4)]
    pub qaoa_tau: f64,
    #[arg(long, default_value_t = 0.8)]
    pub aqa_tau: f64,
    #[arg(long, default_value_t = 5)]
    pub aqa_n: usize,
    #[arg(long, default_value_t = QAOA_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes(pub Vec<usize>);

fn parse_sizes(s: &str) -> Result<Sizes> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Sizes(Vec::new()));
    }
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("bad size {t:?}")))
    };
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        return Ok(Sizes((num(lo)?..=num(hi)?).collect()));
    }
    Ok(Sizes(s.split(',').map(num).collect::<Result<_>>()?))
}

/// splitmix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one job, depending only on its own coordinates so that adding or
/// removing other rows never changes it.
pub fn derive_seed(base: u64, size: usize, label: &str, replicate: usize) -> u64 {
    let mut h = mix64(base);
    h = mix64(h ^ size as u64);
    for b in label.bytes() {
        h = mix64(h ^ b as u64);
    }
    mix64(h ^ replicate as u64)
}

pub const SWEEP_HEADER: [&str; 13] = [
    "N",
    "algorithm",
    "replicate",
    "seed",
    "p_or_n",
    "tau",
    "energy",
    "success_probability_or_fidelity",
    "random_guess",
    "success_ratio",
    "evals",
    "seconds",
    "status",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub algorithm: Algorithm,
    pub replicate: usize,
    pub seed: u64,
    pub p_or_n: Option<usize>,
    pub tau: Option<f64>,
    pub energy: Option<f64>,
    pub success_probability_or_fidelity: Option<f64>,
    pub random_guess: Option<f64>,
    pub success_ratio: Option<f64>,
    pub evals: Option<usize>,
    pub seconds: Option<f64>,
    /// `ok`, or the error that ended the row.
    pub status: String,
}

impl SweepRow {
    fn record(&self) -> Vec<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        vec![
            self.n.to_string(),
            self.algorithm.name().to_string(),
            self.replicate.to_string(),
            self.seed.to_string(),
            opt(&self.p_or_n),
            opt(&self.tau),
            opt(&self.energy),
            opt(&self.success_probability_or_fidelity),
            opt(&self.random_guess),
            opt(&self.success_ratio),
            opt(&self.evals),
            opt(&self.seconds),
            self.status.clone(),
        ]
    }
}

struct Outcome {
    p_or_n: Option<usize>,
    tau: Option<f64>,
    energy: f64,
    score: f64,
    random_guess: Option<f64>,
    evals: usize,
}

fn run_cell(args: &SweepArgs, n: usize, alg: Algorithm, instance_seed: u64) -> Result<Outcome> {
    match alg {
        Algorithm::Qaoa | Algorithm::Aqa => {
            let flights = ((n as f64 * args.flights_per_route).round() as usize).max(1);
            let inst = CoverGenerator::new(n, flights).generate(instance_seed)?.instance;
            let model = inst.to_ising();
            let guess = 0.5f64.powi(n as i32);
            if alg == Algorithm::Aqa {
                let cfg = AnnealConfig::new(args.aqa_tau, args.aqa_n, Schedule::Linear)?;
                let s = aqa_evolve(&model, &cfg)?;
                return Ok(Outcome {
                    p_or_n: Some(args.aqa_n),
                    tau: Some(args.aqa_tau),
                    energy: s.expectation_diagonal(&model.diagonal()?),
                    score: success_probability(&s, &model)?,
                    random_guess: Some(guess),
                    evals: 0,
                });
            }
            let cfg = AnnealConfig::new(args.qaoa_tau, args.p.saturating_sub(1), Schedule::Linear)?;
            let init = aqa_to_qaoa_angles(&cfg, AngleConvention::LeftPoint)?;
            let opt = OptimizerConfig::Simplex(SimplexOptions {
                max_evals: args.budget,
                ..Default::default()
            });
            let run = qaoa_optimize(&model, &init, &opt)?;
            Ok(Outcome {
                p_or_n: Some(args.p),
                tau: Some(args.qaoa_tau),
                energy: run.final_energy,
                score: run.success_probability,
                random_guess: Some(guess),
                evals: run.evals,
            })
        }
        Algorithm::Vqe | Algorithm::Quasi => {
            let model = HeisenbergModel::isotropic_ring(n)?;
            let ansatz = build_ansatz(n)?;
            let neel = StateVector::basis(n, neel_state(n)?)?;
            let opts = VqeOptions::default();
            let r = if alg == Algorithm::Vqe {
                vqe_optimize(&model, &ansatz, &vec![0.0; ansatz.num_params()], &neel, &opts)?
            } else {
                let cfg = QuasiConfig {
                    improvement_threshold: args.threshold,
                    ..Default::default()
                };
                quasi_dynamics(&model, &ansatz, &neel, &cfg, &opts)?
            };
            let e0 = reference_energy(&model)?;
            Ok(Outcome {
                p_or_n: Some(r.rounds),
                tau: None,
                energy: r.final_energy,
                score: r.fidelity(e0)?,
                random_guess: None,
                evals: r.evals,
            })
        }
    }
}

/// Runs every `(size, algorithm, replicate)` job and returns the rows sorted
/// by those keys. A failing job yields a row with its error in `status`.
pub fn sweep_rows(args: &SweepArgs, timing: bool) -> Vec<SweepRow> {
    let mut jobs = Vec::new();
    for &n in &args.sizes.0 {
        for &alg in &args.algorithms {
            for rep in 0..args.replicates {
                jobs.push((n, alg, rep));
            }
        }
    }
    jobs.sort();
    jobs.dedup();
    let work = || {
        jobs.par_iter()
            .map(|&(n, alg, rep)| {
                let seed = derive_seed(args.seed, n, alg.name(), rep);
                let instance_seed = derive_seed(args.seed, n, "instance", rep);
                let start = Instant::now();
                let out = run_cell(args, n, alg, instance_seed);
                let seconds = timing.then(|| start.elapsed().as_secs_f64());
                let mut row = SweepRow {
                    n,
                    algorithm: alg,
                    replicate: rep,
                    seed,
                    p_or_n: None,
                    tau: None,
                    energy: None,
                    success_probability_or_fidelity: None,
                    random_guess: None,
                    success_ratio: None,
                    evals: None,
                    seconds,
                    status: "ok".into(),
                };
                match out {
                    Ok(o) => {
                        row.p_or_n = o.p_or_n;
                        row.tau = o.tau;
                        row.energy = Some(o.energy);
                        row.success_probability_or_fidelity = Some(o.score);
                        row.random_guess = o.random_guess;
                        row.success_ratio = o.random_guess.map(|g| o.score / g);
                        row.evals = Some(o.evals);
                    }
                    Err(e) => row.status = format!("error: {e}"),
                }
                row
            })
            .collect::<Vec<_>>()
    };
    match args.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(work))
            .unwrap_or_else(|_| work()),
        None => work(),
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record(r.record()).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Writes the CSV table and, next to it, `<output>.config.json` with the
/// resolved arguments. Without `--output` the table goes to stdout.
pub fn run_sweep(args: &SweepArgs, timing: bool) -> Result<()> {
    let rows = sweep_rows(args, timing);
    let table = sweep_csv(&rows)?;
    match &args.output {
        Some(path) => {
            let echo = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "config": { "command": "sweep", "args": args },
            });
            let mut side = path.clone().into_os_string();
            side.push(".config.json");
            let mut bytes = serde_json::to_vec_pretty(&echo)?;
            bytes.push(b'\n');
            write_atomic(&PathBuf::from(side), &bytes)?;
            write_atomic(path, &table)
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&table)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_ranges() {
        assert_eq!(parse_sizes("7..10").unwrap().0, vec![7, 8, 9, 10]);
        assert_eq!(parse_sizes("4..=5").unwrap().0, vec![4, 5]);
        assert_eq!(parse_sizes("3, 5").unwrap().0, vec![3, 5]);
        assert!(parse_sizes("").unwrap().0.is_empty());
        assert!(parse_sizes("a..b").is_err());
    }

    #[test]
    fn seeds_depend_only_on_coordinates() {
        let a = derive_seed(1, 8, "qaoa", 0);
        assert_eq!(a, derive_seed(1, 8, "qaoa", 0));
        assert_ne!(a, derive_seed(1, 8, "qaoa", 1));
        assert_ne!(a, derive_seed(1, 9, "qaoa", 0));
        assert_ne!(a, derive_seed(1, 8, "aqa", 0));
        assert_ne!(a, derive_seed(2, 8, "qaoa", 0));
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let rows: Vec<SweepRow> = Vec::new();
        let csv = String::from_utf8(sweep_csv(&rows).unwrap()).unwrap();
        assert_eq!(csv, SWEEP_HEADER.join(",") + "\n");
    }
}
