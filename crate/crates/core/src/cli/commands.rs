use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::derive_seed;
use crate::eigensolver::{ground_dense, ground_lanczos, LanczosConfig};
use crate::optimizers::{BfgsOptions, OptimizerConfig, SimplexOptions};
use crate::partitioned::{random_circuit, PartitionedState};
use crate::problems::io::{read_instance, Instance};
use crate::problems::{heisenberg_ring, neel_state, CoverGenerator, ExactCoverInstance, HeisenbergModel};
use crate::statevector::{Bitstring, StateVector};
use crate::variational::{
    aqa_evolve, qaoa_energy, qaoa_optimize, success_probability, AngleConvention, AnnealConfig,
    QaoaAngles, QaoaInit, Schedule,
};
use crate::vqe::{
    build_ansatz, quasi_dynamics_from, random_theta, vqe_optimize, GradientMode, QuasiConfig,
    VqeOptions, VqeResult, VQE_MAX_EVALS,
};
use crate::{Error, Result};

/// Largest model the `exact` and VQE commands diagonalise densely.
const DENSE_AUTO_MAX: usize = 8;

fn elapsed(start: Instant, timing: bool) -> Option<f64> {
    timing.then(|| start.elapsed().as_secs_f64())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenMethod {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergArgs {
    /// Ring length.
    #[arg(long, required_unless_present = "instance")]
    pub size: Option<usize>,
    /// Heisenberg edge-list file instead of a ring.
    #[arg(long, conflicts_with = "size")]
    pub instance: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub jxx: f64,
    #[arg(long, default_value_t = 1.0)]
    pub jyy: f64,
    #[arg(long, default_value_t = 1.0)]
    pub jzz: f64,
}

impl HeisenbergArgs {
    pub fn model(&self) -> Result<HeisenbergModel> {
        match (&self.instance, self.size) {
            (Some(path), _) => match read_instance(path)? {
                Instance::Heisenberg(m) => Ok(m),
                Instance::Cover(_) => Err(Error::invalid(format!(
                    "{} is an exact cover instance, expected a Heisenberg model",
                    path.display()
                ))),
            },
            (None, Some(n)) => heisenberg_ring(n, self.jxx, self.jyy, self.jzz),
            (None, None) => Err(Error::invalid("need --size or --instance")),
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactArgs {
    #[command(flatten)]
    pub model: HeisenbergArgs,
    #[arg(long, value_enum, default_value_t = EigenMethod::Auto)]
    pub method: EigenMethod,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub e0: f64,
    pub iterations: usize,
    pub residual: f64,
    pub near_degenerate: bool,
    pub method: EigenMethod,
    pub wall_time: Option<f64>,
}

fn solve_ground(
    model: &HeisenbergModel,
    method: EigenMethod,
    cfg: &LanczosConfig,
) -> Result<(crate::eigensolver::EigenResult, EigenMethod)> {
    let n = model.num_spins();
    let method = match method {
        EigenMethod::Auto if n <= DENSE_AUTO_MAX => EigenMethod::Dense,
        EigenMethod::Auto => EigenMethod::Lanczos,
        m => m,
    };
    let r = match method {
        EigenMethod::Dense => ground_dense(&model.terms(), n)?,
        _ => ground_lanczos(&model.hamiltonian(), cfg)?,
    };
    Ok((r, method))
}

/// Ground energy used as the fidelity reference.
pub(crate) fn reference_energy(model: &HeisenbergModel) -> Result<f64> {
    Ok(solve_ground(model, EigenMethod::Auto, &LanczosConfig::default())?.0.e0)
}

pub fn run_exact(args: &ExactArgs, timing: bool) -> Result<ExactRecord> {
    let start = Instant::now();
    let model = args.model.model()?;
    let cfg = LanczosConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        seed: args.seed,
        max_basis: None,
    };
    let (r, method) = solve_ground(&model, args.method, &cfg)?;
    Ok(ExactRecord {
        n: model.num_spins(),
        e0: r.e0,
        iterations: r.iterations,
        residual: r.residual,
        near_degenerate: r.near_degenerate,
        method,
        wall_time: elapsed(start, timing),
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    pub qubits: usize,
    /// Local qubits per rank.
    #[arg(long, default_value_t = 5)]
    pub local: usize,
    #[arg(long, default_value_t = 200)]
    pub gates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub ranks: usize,
    pub gates: usize,
    pub local_applications: usize,
    pub global_applications: usize,
    pub amplitudes_exchanged: usize,
    pub exchange_rounds: usize,
    /// Largest amplitude difference to the monolithic replay.
    pub max_abs_diff: f64,
    pub wall_time: Option<f64>,
}

pub fn run_bench(args: &BenchArgs, timing: bool) -> Result<BenchRecord> {
    let start = Instant::now();
    let (n, m) = (args.qubits, args.local);
    let initial = StateVector::zero(n)?;
    let mut part = PartitionedState::split(&initial, m)?;
    let mut mono = initial;
    for op in random_circuit(n, args.gates, m.min(2), args.seed) {
        op.apply(&mut mono)?;
        op.apply_partitioned(&mut part)?;
    }
    let stats = part.stats();
    Ok(BenchRecord {
        n,
        m,
        ranks: part.num_ranks(),
        gates: stats.gates,
        local_applications: stats.local_applications,
        global_applications: stats.global_applications,
        amplitudes_exchanged: stats.amplitudes_exchanged,
        exchange_rounds: stats.exchange_rounds,
        max_abs_diff: part.gather()?.max_abs_diff(&mono),
        wall_time: elapsed(start, timing),
    })
}

/// Exact cover instance from a file or the planted generator.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceArgs {
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Routes (qubits) of a generated instance.
    #[arg(long, default_value_t = 8, conflicts_with = "instance")]
    pub routes: usize,
    /// Flights of a generated instance; defaults to the route count.
    #[arg(long, conflicts_with = "instance")]
    pub flights: Option<usize>,
    /// Generator seed; defaults to `--seed`.
    #[arg(long, conflicts_with = "instance")]
    pub instance_seed: Option<u64>,
}

impl InstanceArgs {
    /// The instance and a label for the record.
    pub fn load(&self, seed: u64) -> Result<(ExactCoverInstance, String)> {
        if let Some(path) = &self.instance {
            return match read_instance(path)? {
                Instance::Cover(c) => Ok((c, path.display().to_string())),
                Instance::Heisenberg(_) => Err(Error::invalid(format!(
                    "{} is a Heisenberg model, expected an exact cover instance",
                    path.display()
                ))),
            };
        }
        let flights = self.flights.unwrap_or(self.routes);
        let s = self.instance_seed.unwrap_or(seed);
        let inst = CoverGenerator::new(self.routes, flights).generate(s)?.instance;
        Ok((inst, format!("generated:routes={},flights={flights},seed={s}", self.routes)))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Simplex,
    Bfgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerArgs {
    #[arg(long, value_enum)]
    pub optimizer: Option<OptimizerKind>,
    /// Objective-call budget, gradient probes included.
    #[arg(long, alias = "budget")]
    pub max_evals: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    pub ftol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub gtol: f64,
}

impl OptimizerArgs {
    pub fn config(&self, default_kind: OptimizerKind, default_evals: usize) -> OptimizerConfig {
        let max_evals = self.max_evals.unwrap_or(default_evals);
        match self.optimizer.unwrap_or(default_kind) {
            OptimizerKind::Simplex => OptimizerConfig::Simplex(SimplexOptions {
                max_evals,
                ftol: self.ftol,
                ..Default::default()
            }),
            OptimizerKind::Bfgs => OptimizerConfig::Bfgs(BfgsOptions {
                max_evals,
                gtol: self.gtol,
                ..Default::default()
            }),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QaoaInitKind {
    Aqa,
    Random,
    File,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    #[arg(long, value_enum, default_value_t = QaoaInitKind::Aqa)]
    pub init: QaoaInitKind,
    /// JSON angles file for `--init file`.
    #[arg(long, required_if_eq("init", "file"))]
    pub angles: Option<PathBuf>,
    /// Time step of the annealing schedule used by `--init aqa`.
    #[arg(long, default_value_t = 0.4)]
    pub tau: f64,
    #[arg(long, default_value = "linear", value_parser = parse_schedule)]
    pub schedule: Schedule,
    #[arg(long, default_value = "left-point", value_parser = parse_convention)]
    pub convention: AngleConvention,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

fn parse_schedule(s: &str) -> Result<Schedule> {
    s.parse()
}

fn parse_convention(s: &str) -> Result<AngleConvention> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub instance: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub p_or_n: usize,
    pub tau: Option<f64>,
    pub initial_energy: Option<f64>,
    pub final_energy: f64,
    pub mean_cost: f64,
    pub success_probability: f64,
    /// `2^-N`, the chance of guessing a given bitstring.
    pub random_guess: f64,
    pub evals: usize,
    pub angles: Option<QaoaAngles>,
    pub history: Vec<f64>,
    pub wall_time: Option<f64>,
}

pub(crate) const QAOA_BUDGET: usize = 200;

impl QaoaArgs {
    pub fn initial_angles(&self) -> Result<QaoaAngles> {
        let init = match self.init {
            QaoaInitKind::Aqa => QaoaInit::Aqa {
                anneal: AnnealConfig::new(self.tau, self.p.saturating_sub(1), self.schedule)?,
                convention: self.convention,
            },
            QaoaInitKind::Random => QaoaInit::Random {
                p: self.p,
                seed: self.seed,
            },
            QaoaInitKind::File => {
                let path = self.angles.as_ref().ok_or_else(|| Error::invalid("--angles missing"))?;
                let text = std::fs::read_to_string(path)?;
                QaoaInit::Given(serde_json::from_str(&text)?)
            }
        };
        let angles = init.angles()?;
        if angles.p() != self.p {
            return Err(Error::invalid(format!("angles have p = {}, expected {}", angles.p(), self.p)));
        }
        Ok(angles)
    }
}

pub fn run_qaoa(args: &QaoaArgs, timing: bool) -> Result<CoverRecord> {
    let start = Instant::now();
    if args.p == 0 {
        return Err(Error::invalid("--p must be at least 1"));
    }
    let (inst, label) = args.instance.load(args.seed)?;
    let model = inst.to_ising();
    let init = args.initial_angles()?;
    let opt = args.optimizer.config(OptimizerKind::Simplex, QAOA_BUDGET);
    let initial_energy = qaoa_energy(&model, &init)?;
    let run = qaoa_optimize(&model, &init, &opt)?;
    Ok(CoverRecord {
        instance: label,
        n: inst.num_routes(),
        p_or_n: args.p,
        tau: (args.init == QaoaInitKind::Aqa).then_some(args.tau),
        initial_energy: Some(initial_energy),
        final_energy: run.final_energy,
        mean_cost: run.mean_cost,
        success_probability: run.success_probability,
        random_guess: 0.5f64.powi(inst.num_routes() as i32),
        evals: run.evals,
        angles: Some(run.angles),
        history: run.history,
        wall_time: elapsed(start, timing),
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AqaArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = 0.8)]
    pub tau: f64,
    /// Steps beyond the first; `n + 1` Trotter steps in total.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value = "linear", value_parser = parse_schedule)]
    pub schedule: Schedule,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

pub fn run_aqa(args: &AqaArgs, timing: bool) -> Result<CoverRecord> {
    let start = Instant::now();
    let (inst, label) = args.instance.load(args.seed)?;
    let model = inst.to_ising();
    let cfg = AnnealConfig::new(args.tau, args.n, args.schedule)?;
    let state = aqa_evolve(&model, &cfg)?;
    let energy = state.expectation_diagonal(&model.diagonal()?);
    Ok(CoverRecord {
        instance: label,
        n: inst.num_routes(),
        p_or_n: args.n,
        tau: Some(args.tau),
        initial_energy: None,
        final_energy: energy,
        mean_cost: energy + model.offset(),
        success_probability: success_probability(&state, &model)?,
        random_guess: 0.5f64.powi(inst.num_routes() as i32),
        evals: 0,
        angles: None,
        history: Vec::new(),
        wall_time: elapsed(start, timing),
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VqeInit {
    /// Neel state, zero parameters.
    Neel,
    /// Neel state, parameters uniform in `[-pi, pi)`.
    Random,
    /// The basis state given by `--bits`, zero parameters.
    Bits,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientKind {
    Adjoint,
    Fd,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeArgs {
    #[command(flatten)]
    pub model: HeisenbergArgs,
    #[arg(long, value_enum, default_value_t = VqeInit::Neel)]
    pub init: VqeInit,
    /// Initial basis state, most significant qubit first.
    #[arg(long, required_if_eq("init", "bits"))]
    pub bits: Option<String>,
    /// Independent random starts for `--init random`; the best is reported.
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long, value_enum, default_value_t = GradientKind::Adjoint)]
    pub gradient: GradientKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiArgs {
    #[command(flatten)]
    pub vqe: VqeArgs,
    /// Stop once a round lowers the energy by less than this.
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
    #[arg(long, default_value_t = 20)]
    pub max_rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub e0: f64,
    pub e_var: f64,
    pub fidelity: f64,
    pub rounds: usize,
    pub evals: usize,
    pub per_round_energies: Vec<f64>,
    /// Final energy of every restart, in seed order.
    pub restart_energies: Vec<f64>,
    pub params: Vec<f64>,
    pub wall_time: Option<f64>,
}

struct VqeSetup {
    model: HeisenbergModel,
    initial: StateVector,
    opts: VqeOptions,
    starts: Vec<Vec<f64>>,
}

impl VqeArgs {
    fn setup(&self) -> Result<VqeSetup> {
        let model = self.model.model()?;
        let n = model.num_spins();
        let num_params = n * (n - 1);
        let bits = match self.init {
            VqeInit::Bits => {
                let text = self.bits.as_deref().ok_or_else(|| Error::invalid("--bits missing"))?;
                let b: Bitstring = text.parse()?;
                b.expect_len(n)?;
                b
            }
            _ => neel_state(n)?,
        };
        let starts = match self.init {
            VqeInit::Random => {
                if self.restarts == 0 {
                    return Err(Error::invalid("--restarts must be at least 1"));
                }
                (0..self.restarts)
                    .map(|r| random_theta(num_params, derive_seed(self.seed, n, "restart", r)))
                    .collect()
            }
            _ => vec![vec![0.0; num_params]],
        };
        let opts = VqeOptions {
            optimizer: self.optimizer.config(OptimizerKind::Bfgs, VQE_MAX_EVALS),
            gradient: match self.gradient {
                GradientKind::Adjoint => GradientMode::Adjoint,
                GradientKind::Fd => GradientMode::FiniteDifference,
            },
        };
        Ok(VqeSetup {
            initial: StateVector::basis(n, bits)?,
            model,
            opts,
            starts,
        })
    }
}

fn vqe_record(
    setup: &VqeSetup,
    runs: Vec<VqeResult>,
    start: Instant,
    timing: bool,
) -> Result<VqeRecord> {
    let e0 = reference_energy(&setup.model)?;
    let restart_energies = runs.iter().map(|r| r.final_energy).collect();
    let best = runs
        .into_iter()
        .min_by(|a, b| a.final_energy.total_cmp(&b.final_energy))
        .expect("at least one start");
    Ok(VqeRecord {
        n: setup.model.num_spins(),
        e0,
        e_var: best.final_energy,
        fidelity: best.fidelity(e0)?,
        rounds: best.rounds,
        evals: best.evals,
        per_round_energies: best.per_round_energies,
        restart_energies,
        params: best.params_per_round.last().cloned().unwrap_or_default(),
        wall_time: elapsed(start, timing),
    })
}

pub fn run_vqe(args: &VqeArgs, timing: bool) -> Result<VqeRecord> {
    let start = Instant::now();
    let setup = args.setup()?;
    let ansatz = build_ansatz(setup.model.num_spins())?;
    let runs = setup
        .starts
        .par_iter()
        .map(|theta0| vqe_optimize(&setup.model, &ansatz, theta0, &setup.initial, &setup.opts))
        .collect::<Result<Vec<_>>>()?;
    vqe_record(&setup, runs, start, timing)
}

pub fn run_quasi(args: &QuasiArgs, timing: bool) -> Result<VqeRecord> {
    let start = Instant::now();
    let setup = args.vqe.setup()?;
    let ansatz = build_ansatz(setup.model.num_spins())?;
    let cfg = QuasiConfig {
        improvement_threshold: args.threshold,
        max_rounds: args.max_rounds,
    };
    let runs = setup
        .starts
        .par_iter()
        .map(|theta0| quasi_dynamics_from(&setup.model, &ansatz, &setup.initial, theta0, &cfg, &setup.opts))
        .collect::<Result<Vec<_>>>()?;
    vqe_record(&setup, runs, start, timing)
}
