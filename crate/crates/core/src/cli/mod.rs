//! Command-line front end.
//!
//! Every subcommand writes one JSON record (`sweep` writes CSV plus a JSON
//! sidecar) that embeds the resolved configuration and [`SCHEMA_VERSION`].
//! Records are deterministic per seed: wall-clock fields stay `null` unless
//! `--timing` is given. Files are written through a temporary file and a
//! rename, so readers never observe a partial result.

mod commands;
mod sweep;

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use commands::{
    run_aqa, run_bench, run_exact, run_qaoa, run_quasi, run_vqe, AqaArgs, BenchArgs, ExactArgs,
    InstanceArgs, OptimizerArgs, QaoaArgs, QuasiArgs, VqeArgs,
};
pub use sweep::{derive_seed, run_sweep, sweep_csv, sweep_rows, Algorithm, Sizes, SweepArgs, SweepRow, SWEEP_HEADER};

use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_OPTIMIZER: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "varqsim", version, about = "State-vector simulation of QAOA, annealing and VQE")]
pub struct Cli {
    /// Record wall-clock times (makes output files run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// The resolved run configuration echoed into every record.
#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Ground energy of a Heisenberg model.
    Exact(ExactArgs),
    /// Partitioned-backend replay of a random circuit.
    Bench(BenchArgs),
    /// Optimised QAOA on an exact cover instance.
    Qaoa(QaoaArgs),
    /// Approximate quantum annealing on an exact cover instance.
    Aqa(AqaArgs),
    /// Single-round VQE on a Heisenberg ring.
    Vqe(VqeArgs),
    /// Quasi-dynamical VQE on a Heisenberg ring.
    Quasi(QuasiArgs),
    /// Table over sizes, algorithms and replicates.
    Sweep(SweepArgs),
}

/// What [`run`] writes for single-run commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub config: Command,
    /// `ok` or `aborted`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub result: serde_json::Value,
}

impl RunRecord {
    /// Parses a record and checks its schema version.
    pub fn parse(text: &str) -> crate::Result<Self> {
        let rec: RunRecord = serde_json::from_str(text)?;
        if rec.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(format!(
                "schema version {} is not {SCHEMA_VERSION}",
                rec.schema_version
            )));
        }
        Ok(rec)
    }
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> crate::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::LengthMismatch { .. }
        | Error::QubitOutOfRange { .. }
        | Error::Json(_) => EXIT_PARSE,
        Error::TooManyQubits { .. } => EXIT_RESOURCE,
        Error::Optimizer(_) => EXIT_OPTIMIZER,
        Error::NotConverged { .. } | Error::Io(_) => EXIT_FAILURE,
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> crate::Result<()> {
    match output {
        Some(p) => write_atomic(p, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn single_run(cmd: &Command, timing: bool) -> (RunRecord, Option<Error>) {
    let outcome = match cmd {
        Command::Exact(a) => run_exact(a, timing).map(to_value),
        Command::Bench(a) => run_bench(a, timing).map(to_value),
        Command::Qaoa(a) => run_qaoa(a, timing).map(to_value),
        Command::Aqa(a) => run_aqa(a, timing).map(to_value),
        Command::Vqe(a) => run_vqe(a, timing).map(to_value),
        Command::Quasi(a) => run_quasi(a, timing).map(to_value),
        Command::Sweep(_) => unreachable!("sweep writes CSV"),
    };
    let (status, error, result, err) = match outcome {
        Ok(v) => ("ok", None, v, None),
        Err(e) => {
            let partial = match &e {
                Error::Optimizer(o) => o.partial().map(to_value),
                Error::NotConverged { best } => Some(serde_json::json!({
                    "e0": best.e0,
                    "iterations": best.iterations,
                    "residual": best.residual,
                })),
                _ => None,
            };
            ("aborted", Some(e.to_string()), partial.unwrap_or_default(), Some(e))
        }
    };
    let rec = RunRecord {
        schema_version: SCHEMA_VERSION,
        config: cmd.clone(),
        status: status.into(),
        error,
        result,
    };
    (rec, err)
}

fn to_value<T: Serialize>(v: T) -> serde_json::Value {
    serde_json::to_value(v).expect("records serialise")
}

fn output_of(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Exact(a) => a.output.as_deref(),
        Command::Bench(a) => a.output.as_deref(),
        Command::Qaoa(a) => a.output.as_deref(),
        Command::Aqa(a) => a.output.as_deref(),
        Command::Vqe(a) => a.output.as_deref(),
        Command::Quasi(a) => a.vqe.output.as_deref(),
        Command::Sweep(a) => a.output.as_deref(),
    }
}

/// Executes a parsed command line and returns the process exit code.
///
/// Failed runs that still have something to report (an aborted optimiser's
/// best point, an unconverged eigensolver estimate) write their record before
/// returning the nonzero code.
pub fn execute(cli: &Cli) -> i32 {
    let output = output_of(&cli.command);
    if let Command::Sweep(args) = &cli.command {
        return match run_sweep(args, cli.timing) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        };
    }
    let (rec, err) = single_run(&cli.command, cli.timing);
    let write_record = err.is_none() || !rec.result.is_null();
    if write_record {
        let mut bytes = serde_json::to_vec_pretty(&rec).expect("records serialise");
        bytes.push(b'\n');
        if let Err(e) = emit(output, &bytes) {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    }
    match err {
        None => EXIT_OK,
        Some(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
