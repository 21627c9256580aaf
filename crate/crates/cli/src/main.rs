//! `spinsqueeze`: squeezed spin coherent states from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 bad configuration,
//! 3 numerical failure (a JSON diagnostic is printed on stderr).

mod config;
mod output;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use spinsqueeze::bargmann::ComplexMatrixJson;
use spinsqueeze::io::{
    complex_to_json, read_state_csv, vector_to_json, write_grid_csv, write_propagation_csv, write_state_csv,
    write_state_files, GridValue,
};
use spinsqueeze::propagation::{
    compare_propagation, propagate_symbol, quantum_propagate, semiclassical_prediction, HamiltonianSpec,
};
use spinsqueeze::reduction::{reduce_exact, reduce_quadrature, reduce_symbol_matrix, symbol_eval_closed};
use spinsqueeze::spin::{husimi_cp1, ket_mu, ket_mu_norm_sqr, reduced_to_state, reduced_to_state_at, SpinState, SqueezeParameter};
use spinsqueeze::validation::{self, Options, Selection};
use spinsqueeze::Error;

use config::{pick, RunConfig};
use output::{emit, to_json};

#[derive(Debug)]
pub enum CliError {
    Validation,
    Config(String),
    Numerical(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ConvergenceFailure { .. }
            | Error::BlowUp { .. }
            | Error::DiskExit { .. }
            | Error::NumericalInconsistency(_) => CliError::Numerical(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn diagnostic(&self) -> serde_json::Value {
        match self {
            CliError::Validation => json!({"error": "validation", "message": "one or more checks failed"}),
            CliError::Config(msg) => json!({"error": "config", "message": msg}),
            CliError::Numerical(e) => {
                let mut v = json!({"error": "numerical", "message": e.to_string()});
                match e {
                    Error::ConvergenceFailure { nodes, estimate } => {
                        v["nodes"] = json!(nodes);
                        v["estimate"] = json!(complex_to_json(*estimate));
                    }
                    Error::BlowUp { t } => v["t"] = json!(t),
                    Error::DiskExit { t, kappa } => {
                        v["t"] = json!(t);
                        v["kappa"] = json!(kappa);
                    }
                    _ => {}
                }
                v
            }
        }
    }
}

#[derive(Parser)]
#[command(name = "spinsqueeze", version, about = "Squeezed spin coherent states by reduction of Bargmann-space Gaussians")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of |o,mu> in the |n> basis (CSV n,re,im).
    Ket(KetArgs),
    /// Husimi function of the normalized |o,mu> on a grid of the zeta chart.
    Husimi(HusimiArgs),
    /// Reduced state Psi_{A,w}: value at a point, or coefficients for N = 2.
    Reduce(ReduceArgs),
    /// Gaussian symbol of Psi_{A,w} at its center.
    Symbol(SymbolArgs),
    /// Norms of the reduced lower-corner state and of |o,mu> over a list of k.
    NormScan(NormScanArgs),
    /// Symbol trajectory, or propagated spin state.
    Propagate(PropagateArgs),
    /// Distance between exact and semiclassical propagation of |o,0>.
    Compare(CompareArgs),
    /// Run the validation checks.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct KetArgs {
    #[arg(long)]
    k: Option<u32>,
    /// Squeeze parameter as re,im.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Scale to unit l2 norm.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct HusimiArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// min:max:steps, or re_axis,im_axis.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    k: Option<u32>,
    /// Symmetric matrix as JSON rows of [re, im].
    #[arg(long)]
    matrix: Option<String>,
    /// Center on the unit sphere as JSON [[re, im], ...]; defaults to e_1.
    #[arg(long)]
    w: Option<String>,
    /// Evaluation point; without it, N = 2 coefficients are written as CSV.
    #[arg(long)]
    z: Option<String>,
    /// Also evaluate by quadrature over the circle.
    #[arg(long)]
    quadrature: bool,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SymbolArgs {
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    w: Option<String>,
    /// Horizontal vector at which to evaluate the symbol.
    #[arg(long)]
    eta: Option<String>,
}

#[derive(Args)]
struct NormScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Comma-separated k values.
    #[arg(long)]
    k_list: Option<String>,
}

#[derive(Args)]
struct PropagateArgs {
    /// JSON file with {"terms": [...]}; defaults to a^2 l1^2 - b^2 l2^2.
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Initial squeeze parameter re,im.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Propagate the normalized |o,mu> at this k exactly and write the state.
    #[arg(long)]
    k: Option<u32>,
    /// Propagate the state in this CSV file exactly.
    #[arg(long, conflicts_with = "k")]
    state: Option<PathBuf>,
    /// With --k: write the semiclassical prediction instead of the exact state.
    #[arg(long, requires = "k")]
    semiclassical: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Also write PREFIX.quantum.csv and PREFIX.semiclassical.csv.
    #[arg(long)]
    states: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// core, asymptotics, propagation or all.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, hide = true)]
    l3_scale: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Ket(args) => cmd_ket(args, cfg, out),
        Command::Husimi(args) => cmd_husimi(args, cfg, out),
        Command::Reduce(args) => cmd_reduce(args, cfg, out),
        Command::Symbol(args) => cmd_symbol(args, cfg, out),
        Command::NormScan(args) => cmd_norm_scan(args, cfg, out),
        Command::Propagate(args) => cmd_propagate(args, cfg, out),
        Command::Compare(args) => cmd_compare(args, cfg, out),
        Command::Validate(args) => cmd_validate(args, cfg, out),
    }
}

fn squeeze(mu: Complex64) -> Result<SqueezeParameter, CliError> {
    Ok(SqueezeParameter::new(mu)?)
}

fn check_k(k: u32) -> Result<u32, CliError> {
    if k == 0 {
        return Err(CliError::Config("k must be at least 1".into()));
    }
    Ok(k)
}

fn state_csv(s: &SpinState) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_state_csv(&mut buf, s)?;
    Ok(buf)
}

/// State CSV to `out` (with its JSON sidecar) or to stdout.
fn emit_state(out: Option<&Path>, s: &SpinState, normalized: bool) -> Result<(), CliError> {
    match out {
        Some(path) => Ok(write_state_files(path, s, normalized)?),
        None => emit(None, &state_csv(s)?),
    }
}

fn cmd_ket(args: KetArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let k = check_k(pick(args.k, cfg.k, "--k")?)?;
    let mu = squeeze(config::mu(args.mu.as_deref(), cfg.mu)?)?;
    let normalize = args.normalize || cfg.normalize.unwrap_or(false);
    let mut s = ket_mu(k, mu)?;
    if normalize {
        s = s.normalized()?;
    }
    emit_state(out, &s, normalize)
}

fn cmd_husimi(args: HusimiArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let k = check_k(pick(args.k, cfg.k, "--k")?)?;
    let mu = squeeze(config::mu(args.mu.as_deref(), cfg.mu)?)?;
    let (re_axis, im_axis) = config::grid(&pick(args.grid, cfg.grid, "--grid")?)?;
    let s = ket_mu(k, mu)?.normalized()?;
    let mut values = Vec::with_capacity(re_axis.steps * im_axis.steps);
    for y in im_axis.points() {
        for x in re_axis.points() {
            let zeta = Complex64::new(x, y);
            values.push(GridValue { zeta, value: husimi_cp1(&s, zeta) });
        }
    }
    let mut buf = Vec::new();
    write_grid_csv(&mut buf, &values)?;
    emit(out, &buf)
}

fn center(flag: Option<&str>, cfg: Option<Vec<[f64; 2]>>, n: usize) -> Result<spinsqueeze::numerics::ComplexVector, CliError> {
    Ok(config::vector(flag, cfg, "--w")?.unwrap_or_else(|| {
        spinsqueeze::numerics::ComplexVector::from_fn(n, |i, _| Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0))
    }))
}

fn cmd_reduce(args: ReduceArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let k = check_k(pick(args.k, cfg.k, "--k")?)?;
    let a = config::matrix(args.matrix.as_deref(), cfg.matrix)?;
    let w = center(args.w.as_deref(), cfg.w, a.dim())?;
    let Some(z) = config::vector(args.z.as_deref(), cfg.z, "--z")? else {
        if a.dim() != 2 {
            return Err(CliError::Config("coefficients need N = 2; pass --z to evaluate pointwise".into()));
        }
        return emit_state(out, &reduced_to_state_at(&a, &w, k)?, false);
    };
    let exact = reduce_exact(&a, &w, k, &z)?;
    let mut report = json!({"k": k, "value": complex_to_json(exact), "abs": exact.norm()});
    if args.quadrature {
        let tol = args.tol.or(cfg.tol).unwrap_or(1e-13);
        let q = reduce_quadrature(&a, &w, k, &z, tol)?;
        report["quadrature"] = json!(complex_to_json(q));
        report["relative_difference"] = json!((exact - q).norm() / q.norm());
    }
    emit(out, &to_json(&report)?)
}

#[derive(Serialize)]
struct SymbolReport {
    center: Vec<[f64; 2]>,
    prefactor: [f64; 2],
    matrix: ComplexMatrixJson,
    kappa: f64,
    frame: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<[f64; 2]>,
}

fn cmd_symbol(args: SymbolArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let a = config::matrix(args.matrix.as_deref(), cfg.matrix)?;
    let w = center(args.w.as_deref(), cfg.w, a.dim())?;
    let sym = reduce_symbol_matrix(&a, &w)?;
    let value = match config::vector(args.eta.as_deref(), cfg.eta, "--eta")? {
        Some(eta) => Some(complex_to_json(symbol_eval_closed(&sym, &eta)?)),
        None => None,
    };
    let report = SymbolReport {
        center: vector_to_json(sym.center()),
        prefactor: complex_to_json(sym.prefactor()),
        matrix: ComplexMatrixJson::from(sym.matrix().matrix()),
        kappa: sym.matrix().kappa(),
        frame: sym.frame().iter().map(vector_to_json).collect(),
        value,
    };
    emit(out, &to_json(&report)?)
}

fn cmd_norm_scan(args: NormScanArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let mu = squeeze(config::mu(args.mu.as_deref(), cfg.mu)?)?;
    let ks = match args.k_list {
        Some(spec) => config::k_list(&spec)?,
        None => pick(None, cfg.k_list, "--k-list")?,
    };
    let damp = (1.0 - mu.value().norm_sqr()).sqrt();
    let corner = spinsqueeze::bargmann::SqueezeMatrix::lower_corner(mu.value())?;
    let mut w = csv_writer();
    w.write_record(["k", "reduced_norm_sqr", "reduced_ratio", "ket_norm_sqr", "ket_ratio"]).map_err(csv_err)?;
    for k in ks {
        let k = check_k(k)?;
        let kf = k as f64;
        let reduced = reduced_to_state(&corner, k)?.norm_sqr();
        let ket = ket_mu_norm_sqr(k, mu)?;
        let row = [reduced, kf * kf * reduced * damp / PI, ket, ket * damp].map(spinsqueeze::io::fmt_f64);
        w.write_record(std::iter::once(k.to_string()).chain(row)).map_err(csv_err)?;
    }
    emit(out, &w.into_inner().map_err(|e| CliError::Config(e.to_string()))?)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn hamiltonian(path: Option<&Path>, cfg: Option<HamiltonianSpec>, a: f64, b: f64) -> Result<HamiltonianSpec, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            config::parse_json(&text, "--hamiltonian")
        }
        None => Ok(cfg.unwrap_or_else(|| HamiltonianSpec::hyperbolic(a, b))),
    }
}

fn cmd_propagate(args: PropagateArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let a = args.a.or(cfg.a).unwrap_or(FRAC_1_SQRT_2);
    let b = args.b.or(cfg.b).unwrap_or(FRAC_1_SQRT_2);
    let h = hamiltonian(args.hamiltonian.as_deref(), cfg.hamiltonian, a, b)?;
    let t = pick(args.t, cfg.t, "--t")?;
    let step = args.step.or(cfg.step).unwrap_or(spinsqueeze::propagation::symbol_ode::DEFAULT_STEP);
    let mu = squeeze(config::mu(args.mu.as_deref(), cfg.mu)?)?;
    if let Some(path) = args.state {
        let file = std::fs::File::open(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let s = read_state_csv(file)?;
        return emit_state(out, &quantum_propagate(&s, &h, t)?, false);
    }
    if let Some(k) = args.k.or(cfg.k) {
        let k = check_k(k)?;
        let s = if args.semiclassical {
            semiclassical_prediction(mu, &h, t, k)?.normalized()?
        } else {
            quantum_propagate(&ket_mu(k, mu)?.normalized()?, &h, t)?
        };
        return emit_state(out, &s, true);
    }
    let res = propagate_symbol(&h, mu, t, step)?;
    let mut buf = Vec::new();
    write_propagation_csv(&mut buf, &res)?;
    emit(out, &buf)
}

fn cmd_compare(args: CompareArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let k = check_k(pick(args.k, cfg.k, "--k")?)?;
    let t = pick(args.t, cfg.t, "--t")?;
    let a = args.a.or(cfg.a).unwrap_or(FRAC_1_SQRT_2);
    let b = args.b.or(cfg.b).unwrap_or(FRAC_1_SQRT_2);
    let report = compare_propagation(k, t, a, b)?;
    if let Some(prefix) = args.states {
        let with = |suffix: &str| {
            let mut name = prefix.clone().into_os_string();
            name.push(suffix);
            PathBuf::from(name)
        };
        write_state_files(&with(".quantum.csv"), &report.lhs, true)?;
        write_state_files(&with(".semiclassical.csv"), &report.rhs, true)?;
    }
    emit(out, &to_json(&report)?)
}

fn cmd_validate(args: ValidateArgs, cfg: RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let suite_name = args.suite.or(cfg.suite).unwrap_or_else(|| "all".to_string());
    let selection: Selection = suite_name.parse()?;
    let defaults = Options::default();
    let opts = Options { seed: args.seed.unwrap_or(defaults.seed), l3_scale: args.l3_scale.unwrap_or(1.0) };
    let checks = validation::run(selection, &opts);
    let passed = checks.iter().all(|c| c.passed);
    let report = json!({"suite": suite_name, "seed": opts.seed, "passed": passed, "checks": checks});
    emit(out, &to_json(&report)?)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Validation)
    }
}
