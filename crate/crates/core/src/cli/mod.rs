//! The `qx` command-line tool. Exit codes: 0 success, 1 failed check,
//! 2 usage or I/O error.

mod sweep;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::{QxError, Result};
use crate::qec::{depolarizing_pauli_noise, kl_decompose, kl_report_from_gram, CodeIsometry};
use crate::quasi::{max_gate_count, simulate_computation, SimParams};
use crate::sampling::stable_hash;
use crate::su_algebra::{check_invariants, SuBasis};
use crate::vbs::{eta, VbsCode, DEFAULT_BOND_ERROR_P};

pub use sweep::{sweep_row, SweepRow, SWEEP_HEADER};

#[derive(Debug, Parser)]
#[command(name = "qx", version, about = "Quasi-exact VBS code workbench")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "QX_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every su(d) basis identity.
    Algebra {
        #[arg(long, value_parser = clap::value_parser!(u16).range(2..))]
        d: u16,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Report on a single VBS code.
    Vbs {
        #[arg(long, value_parser = clap::value_parser!(u16).range(2..))]
        d: u16,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        n: u16,
        #[arg(long, default_value_t = DEFAULT_BOND_ERROR_P)]
        p: f64,
    },
    /// Tabulate VBS code quantities over a (d, N) grid.
    Sweep(SweepArgs),
    /// Knill-Laflamme report with the canonical recovery error.
    Kl {
        /// vbs:D:N, five_one_three, four_two_two or file:PATH.
        #[arg(long)]
        code: String,
        #[arg(long, value_enum, default_value_t = ErrorModel::Pauli1)]
        errors: ErrorModel,
        /// Total error probability of the noise model.
        #[arg(long, default_value_t = DEFAULT_BOND_ERROR_P)]
        p: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte-Carlo noisy logical circuits.
    Simulate(SimulateArgs),
    /// Largest gate count within an error budget.
    Gates {
        /// Gate accuracy; taken as |eta(d, N)| when omitted.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, requires = "n")]
        d: Option<usize>,
        #[arg(long, requires = "d")]
        n: Option<usize>,
        #[arg(long)]
        target: f64,
        /// Synthesis error already spent.
        #[arg(long, default_value_t = 0.0)]
        synthesis: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ErrorModel {
    /// Single-qubit depolarizing noise (qubit codes).
    Pauli1,
    /// Bond errors on every bond (VBS codes).
    Bond,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Inclusive range LO..HI or a single value.
    #[arg(long, default_value = "2..3")]
    pub d: String,
    #[arg(long, default_value = "3..8")]
    pub n: String,
    #[arg(long, value_enum, default_value_t = ErrorModel::Bond)]
    pub errors: ErrorModel,
    #[arg(long, default_value_t = DEFAULT_BOND_ERROR_P)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u16).range(2..))]
    pub d: u16,
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub n: u16,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides eta(d, N).
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the per-step CSV of trial 0 here.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

enum Failure {
    Check(String),
    Usage(String),
}

impl From<QxError> for Failure {
    fn from(e: QxError) -> Self {
        match e {
            QxError::Io(_)
            | QxError::Parse(_)
            | QxError::InvalidParameter(_)
            | QxError::InvalidDimension(_)
            | QxError::IndexOutOfRange(_)
            | QxError::DimensionMismatch(_)
            | QxError::DenseCapExceeded { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Algebra { d, tol } => cmd_algebra(d as usize, tol),
        Command::Vbs { d, n, p } => cmd_vbs(d as usize, n as usize, p),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Kl { code, errors, p, output } => cmd_kl(&code, errors, p, output.as_deref()),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Gates { eta, d, n, target, synthesis } => cmd_gates(eta, d.zip(n), target, synthesis),
    })
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn cmd_algebra(d: usize, tol: f64) -> Outcome {
    let residuals = check_invariants(&SuBasis::new(d)?);
    let mut text = format!("d = {d}\n");
    for (name, value) in residuals.named() {
        writeln!(text, "{name:<15} {value:.3e}").expect("writing to a String");
    }
    writeln!(text, "{:<15} {:.3e}", "max", residuals.max()).expect("writing to a String");
    emit(None, &text)?;
    if residuals.max() < tol {
        Ok(())
    } else {
        Err(Failure::Check(format!("max residual {:.3e} ≥ {tol:e}", residuals.max())))
    }
}

fn cmd_vbs(d: usize, n: usize, p: f64) -> Outcome {
    let row = sweep_row(d, n, p)?;
    emit(None, &row.to_text())
}

/// "a..b" (inclusive) or "a". A reversed range is empty.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| QxError::Parse(format!("range bound {t:?}: {e}")));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?..=parse(hi)?).collect()),
        None => Ok(vec![parse(s)?]),
    }
}

fn cmd_sweep(args: &SweepArgs) -> Outcome {
    if args.errors != ErrorModel::Bond {
        return Err(Failure::Usage("sweep supports only --errors bond".into()));
    }
    let grid: Vec<(usize, usize)> = parse_range(&args.d)?
        .into_iter()
        .flat_map(|d| parse_range(&args.n).map(|ns| ns.into_iter().map(move |n| (d, n)).collect::<Vec<_>>()))
        .flatten()
        .collect();
    if let Some(&(d, n)) = grid.iter().find(|(d, n)| *d < 2 || *n < 1) {
        return Err(Failure::Usage(format!("grid point d = {d}, N = {n} needs d ≥ 2 and N ≥ 1")));
    }
    let rows: Vec<SweepRow> = grid.par_iter().map(|&(d, n)| sweep_row(d, n, args.p)).collect::<Result<_>>()?;
    let text = match args.format {
        Format::Csv => {
            let mut out = format!("{SWEEP_HEADER}\n");
            for row in &rows {
                out.push_str(&row.to_csv());
                out.push('\n');
            }
            out
        }
        Format::Text => rows.iter().map(|r| format!("[[row]]\n{}", r.to_text())).collect::<Vec<_>>().join("\n"),
    };
    emit(args.output.as_deref(), &text)
}

/// Resolves a code selector.
pub fn parse_code(selector: &str) -> Result<CodeSelection> {
    if let Some(rest) = selector.strip_prefix("vbs:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(QxError::Parse(format!("expected vbs:D:N, got {selector:?}")));
        }
        let num = |t: &str| t.parse::<usize>().map_err(|e| QxError::Parse(format!("{t:?} in {selector:?}: {e}")));
        return Ok(CodeSelection::Vbs(VbsCode::new(num(parts[0])?, num(parts[1])?)?));
    }
    if let Some(path) = selector.strip_prefix("file:") {
        return CodeIsometry::from_file(Path::new(path)).map(CodeSelection::Isometry).map_err(|e| match e {
            QxError::Io(io) => QxError::Io(std::io::Error::new(io.kind(), format!("{path}: {io}"))),
            other => other,
        });
    }
    match selector {
        "five_one_three" => Ok(CodeSelection::Isometry(CodeIsometry::five_one_three())),
        "four_two_two" => Ok(CodeSelection::Isometry(CodeIsometry::four_two_two())),
        _ => Err(QxError::InvalidParameter(format!("unknown code selector {selector:?}"))),
    }
}

pub enum CodeSelection {
    Vbs(VbsCode),
    Isometry(CodeIsometry),
}

fn cmd_kl(selector: &str, errors: ErrorModel, p: f64, output: Option<&Path>) -> Outcome {
    if !(0.0..=1.0).contains(&p) {
        return Err(Failure::Usage(format!("error probability {p} outside [0, 1]")));
    }
    let report = match (parse_code(selector)?, errors) {
        (CodeSelection::Vbs(code), ErrorModel::Bond) => kl_report_from_gram(&code.bond_error_gram(p, &[])?)?,
        (CodeSelection::Isometry(code), ErrorModel::Pauli1) => {
            if code.dims().iter().any(|&q| q != 2) {
                return Err(Failure::Usage("pauli1 errors need a qubit code".into()));
            }
            kl_decompose(&code, &depolarizing_pauli_noise(code.dims().len(), p))?
        }
        (CodeSelection::Vbs(_), ErrorModel::Pauli1) => {
            return Err(Failure::Usage("VBS codes take --errors bond".into()));
        }
        (CodeSelection::Isometry(_), ErrorModel::Bond) => {
            return Err(Failure::Usage("bond errors need a vbs:D:N code".into()));
        }
    };
    let text = format!("code = {selector:?}\nerrors = {:?}\np = {p:?}\n{}", errors_name(errors), report.to_toml()?);
    emit(output, &text)
}

fn errors_name(e: ErrorModel) -> &'static str {
    match e {
        ErrorModel::Pauli1 => "pauli1",
        ErrorModel::Bond => "bond",
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Outcome {
    if args.trials < 1 || args.length < 1 {
        return Err(Failure::Usage("--trials and --length must be at least 1".into()));
    }
    let trials: Vec<_> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let mut params =
                SimParams::new(args.d as usize, args.n as usize, args.length, stable_hash(args.seed, t as u64));
            params.eta_override = args.eta;
            simulate_computation(&params)
        })
        .collect::<Result<_>>()?;
    let mut text = String::from("trial,seed,final_distance,envelope\n");
    let mut violations = 0;
    for (t, traj) in trials.iter().enumerate() {
        if traj.final_distance() > traj.final_envelope() + 1e-10 {
            violations += 1;
        }
        writeln!(text, "{t},{},{:.11e},{:.11e}", traj.seed, traj.final_distance(), traj.final_envelope())
            .expect("writing to a String");
    }
    let count = trials.len() as f64;
    let mean = |f: fn(&crate::quasi::SimTrajectory) -> f64| trials.iter().map(f).sum::<f64>() / count;
    let max = |f: fn(&crate::quasi::SimTrajectory) -> f64| trials.iter().map(f).fold(0.0, f64::max);
    writeln!(text, "mean,,{:.11e},{:.11e}", mean(|t| t.final_distance()), mean(|t| t.final_envelope()))
        .expect("writing to a String");
    writeln!(text, "max,,{:.11e},{:.11e}", max(|t| t.final_distance()), max(|t| t.final_envelope()))
        .expect("writing to a String");
    emit(args.output.as_deref(), &text)?;
    if let Some(path) = &args.trajectory {
        emit(Some(path), &trials[0].to_csv())?;
    }
    if violations > 0 {
        return Err(Failure::Check(format!("{violations} trials exceed their error envelope")));
    }
    Ok(())
}

fn cmd_gates(accuracy: Option<f64>, code: Option<(usize, usize)>, target: f64, synthesis: f64) -> Outcome {
    let accuracy = match (accuracy, code) {
        (Some(e), None) => e,
        (None, Some((d, n))) => eta(d, n)?.abs(),
        _ => return Err(Failure::Usage("give either --eta or both --d and --n".into())),
    };
    let m = max_gate_count(target, accuracy, synthesis)?;
    emit(None, &format!("{m}\n"))
}
