use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corrtensor::families::{Family, FamilyParams};
use corrtensor::grover::{grover_run_capped, optimal_iterations};
use corrtensor::measure::{e_t_with, r_n, MeasureOptions};
use corrtensor::monotonicity::povm_experiment;
use corrtensor::roof::{roof_estimate, RoofConfig};
use corrtensor::state::KrausSet;
use corrtensor::tensor::export::TensorFile;
use corrtensor::tensor::{full_correlation_tensor, GENERIC_TENSOR_CAP};
use corrtensor::{DensityMatrix, C64};
use serde::Serialize;

mod sweep;
mod verify;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Precondition(#[from] corrtensor::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("suite '{0}' failed")]
    SuiteFailed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::SuiteFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Io { .. } | CliError::Json(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "ctmeasure", version, about = "Correlation-tensor entanglement measures")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Report E_T / R_N alongside the raw value.
    #[arg(long, global = true)]
    pub normalize: bool,
    /// Master seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest register the dense tensor path will build.
    #[arg(long, global = true, default_value_t = GENERIC_TENSOR_CAP)]
    pub max_qubits: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FamilyArgs {
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long)]
    pub m: Option<usize>,
    /// Five comma-separated Schmidt coefficients.
    #[arg(long, value_delimiter = ',', num_args = 5)]
    pub lambdas: Option<Vec<f64>>,
}

impl FamilyArgs {
    pub fn params(&self) -> FamilyParams {
        FamilyParams {
            qubits: self.qubits,
            p: self.p,
            s: self.s,
            phi: self.phi,
            m: self.m,
            lambdas: self
                .lambdas
                .as_ref()
                .map(|l| [l[0], l[1], l[2], l[3], l[4]]),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// E_T of one family member, printed as JSON.
    Measure {
        #[arg(value_parser = parse_family)]
        family: Family,
        #[command(flatten)]
        params: FamilyArgs,
        /// Also write the full correlation tensor in the binary format.
        #[arg(long)]
        export_tensor: Option<PathBuf>,
        /// Keep the wall-clock field in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Tabulate E_T along a parameter grid.
    Sweep(sweep::SweepArgs),
    /// E_T and success probability along Grover iterations.
    Grover {
        #[arg(long, default_value_t = 6)]
        qubits: usize,
        #[arg(long, default_value_t = 0)]
        target: usize,
        /// Iteration count; four times the optimal count by default.
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Two-outcome diagonal POVM on one qubit of a family state.
    PovmDemo {
        #[arg(value_parser = parse_family, default_value = "bai")]
        family: Family,
        #[command(flatten)]
        params: FamilyArgs,
        #[arg(long, default_value_t = 1)]
        qubit: usize,
        #[arg(long, default_value_t = 0.9)]
        kraus_a: f64,
        #[arg(long, default_value_t = 0.2)]
        kraus_b: f64,
    },
    /// Upper bound on the convex roof of a density matrix.
    Roof {
        /// JSON matrix: rows of [re, im] pairs.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ensemble_size: Option<usize>,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Run a named property suite and print its manifest.
    Verify {
        suite: String,
        /// Trial count for the randomized suites.
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes to `--out` or stdout.
pub fn emit(out: Option<&Path>, body: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn measure(g: &Global, family: Family, params: &FamilyArgs, export: Option<&Path>, timing: bool) -> CliResult<()> {
    let state = family.build(&params.params())?;
    let opts = MeasureOptions { cap: g.max_qubits, normalize: g.normalize };
    let report = e_t_with(&state, opts)?;
    if let Some(path) = export {
        let t = full_correlation_tensor(&state)?;
        let mut buf = Vec::new();
        TensorFile::from_corr(&t).write_binary(&mut buf)?;
        fs::write(path, buf).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let mut value = serde_json::to_value(report)?;
    if !timing {
        if let Some(obj) = value.as_object_mut() {
            obj.remove("elapsed_ms");
        }
    }
    emit(g.out.as_deref(), &to_json(&value)?)
}

fn grover(g: &Global, qubits: usize, target: usize, iters: Option<usize>) -> CliResult<()> {
    let iters = iters.unwrap_or(4 * optimal_iterations(qubits));
    let trace = grover_run_capped(qubits, target, iters, g.max_qubits)?;
    let body = match g.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&trace)?,
        Format::Csv => csv(
            "iteration,e_t,success_prob,e_t_normalized",
            trace.rows.iter().map(|r| {
                vec![
                    r.iteration.to_string(),
                    fmt_num(r.e_t),
                    fmt_num(r.success_prob),
                    fmt_num(r.e_t_normalized),
                ]
            }),
        ),
    };
    emit(g.out.as_deref(), &body)
}

fn povm_demo(g: &Global, family: Family, params: &FamilyArgs, qubit: usize, a: f64, b: f64) -> CliResult<()> {
    let state = family.build(&params.params())?;
    let kraus = KrausSet::diagonal_pair(qubit, a, b)?;
    let report = povm_experiment(&state, &kraus)?;
    let r = r_n(state.num_qubits())?;
    let body = match g.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut rows = vec![vec!["input".into(), fmt_num(1.0), fmt_num(report.input_e_t), fmt_num(report.input_e_t / r)]];
            for (i, o) in report.outcomes.iter().enumerate() {
                rows.push(vec![format!("outcome{}", i + 1), fmt_num(o.probability), fmt_num(o.e_t), fmt_num(o.e_t / r)]);
                rows.push(vec![
                    format!("weighted{}", i + 1),
                    fmt_num(o.probability),
                    fmt_num(o.probability * o.e_t),
                    fmt_num(o.probability * o.e_t / r),
                ]);
            }
            rows.push(vec!["average".into(), fmt_num(1.0), fmt_num(report.expected_e_t), fmt_num(report.expected_e_t / r)]);
            rows.push(vec!["gap".into(), String::new(), fmt_num(report.gap), fmt_num(report.gap / r)]);
            csv("row,probability,e_t,e_t_normalized", rows)
        }
    };
    emit(g.out.as_deref(), &body)
}

fn read_density(path: &Path) -> CliResult<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let raw: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: expected rows of [re, im] pairs: {e}", path.display())))?;
    let rows = raw
        .into_iter()
        .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
        .collect();
    Ok(DensityMatrix::from_rows(rows)?)
}

#[derive(Serialize)]
struct RoofOutput {
    upper_bound: f64,
    spectral_value: f64,
    restarts_used: usize,
    converged: bool,
    ensemble_size: usize,
    weights: Vec<f64>,
    seed: u64,
}

fn roof(g: &Global, input: &Path, ensemble_size: Option<usize>, restarts: usize) -> CliResult<()> {
    let rho = read_density(input)?;
    let cfg = RoofConfig { ensemble_size, restarts, seed: g.seed, ..Default::default() };
    let est = roof_estimate(&rho, &cfg)?;
    let out = RoofOutput {
        upper_bound: est.value,
        spectral_value: est.spectral_value,
        restarts_used: est.restarts_used,
        converged: est.converged,
        ensemble_size: est.decomposition.len(),
        weights: est.decomposition.weights.clone(),
        seed: g.seed,
    };
    let body = match g.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&out)?,
        Format::Csv => csv(
            "upper_bound,spectral_value,restarts_used,converged",
            [vec![
                fmt_num(out.upper_bound),
                fmt_num(out.spectral_value),
                out.restarts_used.to_string(),
                out.converged.to_string(),
            ]],
        ),
    };
    emit(g.out.as_deref(), &body)
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    match cli.command {
        Command::Measure { family, params, export_tensor, timing } => {
            measure(g, family, &params, export_tensor.as_deref(), timing)
        }
        Command::Sweep(args) => sweep::run(g, &args),
        Command::Grover { qubits, target, iters } => grover(g, qubits, target, iters),
        Command::PovmDemo { family, params, qubit, kraus_a, kraus_b } => {
            povm_demo(g, family, &params, qubit, kraus_a, kraus_b)
        }
        Command::Roof { input, ensemble_size, restarts } => roof(g, &input, ensemble_size, restarts),
        Command::Verify { suite, trials } => verify::run(g, &suite, trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
