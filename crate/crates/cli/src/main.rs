//! `ksep`: command-line front end for the k-separability criterion.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ksep_core::fcs::{chain_separability_report, FcsSpec};
use ksep_core::io::{load_density_matrix, load_phi_pair, load_product_state, to_json_string};
use ksep_core::optimizer::{optimize_phi, OptimizerSettings};
use ksep_core::sweep::{run_sweep, write_csv, SweepConfig};
use ksep_core::{
    analytic_threshold, criterion::isotropic_numeric_threshold, evaluate_all_k, evaluate_criterion, measurement_plan,
    CriterionResult, DensityMatrix, ProductState, StateFamily, DEFAULT_TOLERANCE,
};
use serde::Serialize;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_SEMANTIC: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

/// Largest dⁿ for which `threshold --numeric` builds dense states.
const MAX_NUMERIC_DIM: usize = 1024;

/// Budget used by `sweep --optimize` and `chain --optimize`.
const SWEEP_OPTIMIZER: OptimizerSettings = OptimizerSettings { restarts: 8, iterations: 10, seed: 0 };

#[derive(Parser)]
#[command(name = "ksep", version, about = "k-separability criterion for multipartite qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the criterion for a state and a pair of product states.
    Eval(EvalArgs),
    /// Sweep a two-parameter family and print a CSV grid.
    Sweep(SweepArgs),
    /// White-noise threshold of the n-party GHZ state.
    Threshold(ThresholdArgs),
    /// Search local unitaries for a pair that flags the state.
    Optimize(OptimizeArgs),
    /// Evaluate an n-site chain state given by its transfer operators.
    Chain(ChainArgs),
    /// List the observables needed to evaluate the criterion.
    Plan(PlanArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("which-k").required(true).args(["k", "all_k"]))]
struct EvalArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    phi1: PathBuf,
    #[arg(long)]
    phi2: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    all_k: bool,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Also reject states with negative eigenvalues.
    #[arg(long)]
    psd_check: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    family: StateFamily,
    /// Grid points per axis, endpoints included.
    #[arg(long)]
    steps: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// `computational` or a JSON file holding {"phi1", "phi2"}.
    #[arg(long, default_value = "computational")]
    phi: String,
    #[arg(long)]
    optimize: bool,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    numeric: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    restarts: usize,
    #[arg(long)]
    iters: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Evaluate every k = 2..n instead of k = 2 only.
    #[arg(long)]
    all_k: bool,
    #[arg(long)]
    optimize: bool,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    phi1: PathBuf,
    #[arg(long)]
    phi2: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn semantic(message: impl Into<String>) -> Self {
        Self { code: EXIT_SEMANTIC, message: message.into() }
    }

    fn from_core(err: ksep_core::Error) -> Self {
        let code = if err.is_input_error() { EXIT_INPUT } else { EXIT_SEMANTIC };
        Self { code, message: err.to_string() }
    }

    fn in_file(path: &Path, err: ksep_core::Error) -> Self {
        let f = Self::from_core(err);
        Self { code: f.code, message: format!("{}: {}", path.display(), f.message) }
    }
}

impl From<ksep_core::Error> for Failure {
    fn from(err: ksep_core::Error) -> Self {
        Self::from_core(err)
    }
}

type Outcome = Result<u8, Failure>;

fn emit_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = to_json_string(value)?;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::from_core(e.into()))
}

fn report_status(results: &[CriterionResult]) -> u8 {
    for r in results {
        let verdict = if r.violated { "violation certificate" } else { "inconclusive" };
        eprintln!("k={}: value {} ({verdict})", r.k, r.value);
    }
    if results.iter().any(|r| r.violated) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn check_dims(state_dims: &[usize], state_path: &Path, phi: &ProductState, phi_path: &Path) -> Result<(), Failure> {
    if phi.dims() != state_dims {
        return Err(Failure::semantic(format!(
            "{}: dims {:?} do not match dims {:?} of {}",
            phi_path.display(),
            phi.dims(),
            state_dims,
            state_path.display()
        )));
    }
    Ok(())
}

fn load_state(path: &Path, check_psd: bool) -> Result<DensityMatrix, Failure> {
    load_density_matrix(path, check_psd).map_err(|e| Failure::in_file(path, e))
}

fn load_phi(path: &Path) -> Result<ProductState, Failure> {
    load_product_state(path).map_err(|e| Failure::in_file(path, e))
}

fn cmd_eval(args: EvalArgs) -> Outcome {
    if !(args.tolerance.is_finite() && args.tolerance >= 0.0) {
        return Err(Failure::semantic(format!("tolerance {} must be finite and non-negative", args.tolerance)));
    }
    let rho = load_state(&args.state, args.psd_check)?;
    let phi1 = load_phi(&args.phi1)?;
    let phi2 = load_phi(&args.phi2)?;
    check_dims(rho.dims(), &args.state, &phi1, &args.phi1)?;
    check_dims(rho.dims(), &args.state, &phi2, &args.phi2)?;
    if let Some(k) = args.k {
        let result = evaluate_criterion(&rho, &phi1, &phi2, k, args.tolerance)?;
        emit_json(&result)?;
        Ok(report_status(std::slice::from_ref(&result)))
    } else {
        let results = evaluate_all_k(&rho, &phi1, &phi2, args.tolerance)?;
        emit_json(&results)?;
        Ok(report_status(&results))
    }
}

fn cmd_sweep(args: SweepArgs) -> Outcome {
    let dims = match args.family {
        StateFamily::GhzWQubit => vec![2; 3],
        StateFamily::GhzXiQutrit => vec![3; 3],
        StateFamily::IsotropicGhz => {
            return Err(Failure::semantic("isotropic-ghz has one parameter; use the threshold command"))
        }
    };
    let (phi1, phi2) = if args.phi == "computational" {
        ProductState::computational_pair(&dims)?
    } else {
        let path = Path::new(&args.phi);
        let pair = load_phi_pair(path).map_err(|e| Failure::in_file(path, e))?;
        for phi in [&pair.0, &pair.1] {
            if phi.dims() != dims {
                return Err(Failure::semantic(format!(
                    "{}: dims {:?} do not match family {} dims {:?}",
                    path.display(),
                    phi.dims(),
                    args.family,
                    dims
                )));
            }
        }
        pair
    };
    let config = SweepConfig {
        family: args.family,
        steps: args.steps,
        ks: args.k,
        phi1,
        phi2,
        optimize: args.optimize.then_some(SWEEP_OPTIMIZER),
        tolerance: DEFAULT_TOLERANCE,
    };
    let records = run_sweep(&config)?;
    let mut buf = Vec::new();
    write_csv(&records, &mut buf)?;
    let mut out = std::io::stdout().lock();
    out.write_all(&buf).and_then(|_| out.flush()).map_err(|e| Failure::from_core(e.into()))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ThresholdReport {
    analytic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<f64>,
}

fn cmd_threshold(args: ThresholdArgs) -> Outcome {
    let analytic = analytic_threshold(args.n, args.d, args.k)?;
    let numeric = if args.numeric {
        let dim = u32::try_from(args.n).ok().and_then(|n| args.d.checked_pow(n));
        if dim.is_none_or(|dim| dim > MAX_NUMERIC_DIM) {
            return Err(Failure::semantic(format!(
                "d^n = {}^{} exceeds {MAX_NUMERIC_DIM}, too large for the numeric check",
                args.d, args.n
            )));
        }
        Some(isotropic_numeric_threshold(args.n, args.d, args.k)?)
    } else {
        None
    };
    emit_json(&ThresholdReport { analytic, numeric })?;
    Ok(EXIT_OK)
}

fn cmd_optimize(args: OptimizeArgs) -> Outcome {
    let rho = load_state(&args.state, false)?;
    let (phi1, phi2) = ProductState::computational_pair(rho.dims())?;
    let settings = OptimizerSettings { restarts: args.restarts, iterations: args.iters, seed: args.seed };
    let report = optimize_phi(&rho, args.k, &phi1, &phi2, settings)?;
    emit_json(&report)?;
    let violated = report.best_value > DEFAULT_TOLERANCE;
    let verdict = if violated { "violation certificate" } else { "inconclusive" };
    eprintln!("k={}: best value {} ({verdict})", args.k, report.best_value);
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_chain(args: ChainArgs) -> Outcome {
    let text = std::fs::read_to_string(&args.spec).map_err(|e| Failure::in_file(&args.spec, e.into()))?;
    let spec: FcsSpec = serde_json::from_str(&text).map_err(|e| Failure::in_file(&args.spec, e.into()))?;
    let (phi1, phi2) = ProductState::computational_pair(&vec![2; spec.sites()])?;
    let ks: Vec<usize> = if args.all_k { Vec::new() } else { vec![2] };
    let optimize = args.optimize.then_some(SWEEP_OPTIMIZER);
    let report = chain_separability_report(&spec, &phi1, &phi2, &ks, optimize, DEFAULT_TOLERANCE)
        .map_err(|e| Failure::in_file(&args.spec, e))?;
    emit_json(&report)?;
    Ok(report_status(&report.results))
}

fn cmd_plan(args: PlanArgs) -> Outcome {
    let phi1 = load_phi(&args.phi1)?;
    let phi2 = load_phi(&args.phi2)?;
    if phi1.parties() != args.n {
        return Err(Failure::semantic(format!(
            "{}: has {} parties but --n is {}",
            args.phi1.display(),
            phi1.parties(),
            args.n
        )));
    }
    check_dims(&phi1.dims(), &args.phi1, &phi2, &args.phi2)?;
    let plan = measurement_plan(&phi1, &phi2, args.k)?;
    emit_json(&plan)?;
    Ok(EXIT_OK)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Chain(a) => cmd_chain(a),
        Command::Plan(a) => cmd_plan(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    panic::set_hook(Box::new(|info| eprintln!("error: internal failure: {info}")));
    let code = match panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(code)) => code,
        Ok(Err(f)) => {
            eprintln!("error: {}", f.message);
            f.code
        }
        Err(_) => EXIT_SEMANTIC,
    };
    ExitCode::from(code)
}
