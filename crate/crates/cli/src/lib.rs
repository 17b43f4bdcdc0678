//! `semiref` command-line front end.

pub mod config;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use semiref::scattering::ScatteringGrid;
use semiref::validate::{log_spaced, ValidationConfig};
use semiref::{
    adiabatic_reflection, evolve_tdse, exact_ho_reflection, lz_closed_form, numerov_reflection,
    reflection_closed_form, reflection_contour_ll, reflection_momentum_space, run_validation, CouplingSpec, Method,
    ReflectionResult,
};

use config::{LzPlan, Output, OutputFormat, ReflectPlan, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file, or output destination. Exit status 2.
    Usage(String),
    /// Some rows or checks failed numerically. Exit status 1.
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(1),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "semiref", version, about = "Above-barrier reflection and Landau-Zener sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection probability over an energy grid.
    Reflect(ReflectArgs),
    /// Two-level transition probability over (T or tau, eps).
    Lz(LzArgs),
    /// Run the invariant suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML file with flat keys named like the flags (underscores for dashes).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Base Gauss-Legendre node count.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Number of quadrature levels (each doubles the nodes).
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long = "rel-tol")]
    pub rel_tol: Option<f64>,
    /// csv or json; inferred from --out when omitted.
    #[arg(long)]
    pub output: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    fn to_config(&self) -> RunConfig {
        RunConfig {
            hbar: self.hbar,
            mass: self.mass,
            nodes: self.nodes,
            levels: self.levels,
            rel_tol: self.rel_tol,
            output: self.output.clone(),
            output_path: self.out.clone(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ReflectArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// inverse_ho, sech2 or lorentzian.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub v0: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub emin: Option<f64>,
    #[arg(long)]
    pub emax: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// linear or log.
    #[arg(long)]
    pub spacing: Option<String>,
    /// Comma list of momentum, closed, contour, numerov, exact, or `all`.
    #[arg(long)]
    pub methods: Option<String>,
}

#[derive(Debug, Args)]
pub struct LzArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// linear or tanh.
    #[arg(long)]
    pub profile: Option<String>,
    /// Sweep time scales T for the linear profile (comma list).
    #[arg(long = "T", conflicts_with = "tau")]
    pub t_scale: Option<String>,
    /// Sweep time scales tau for the tanh profile (comma list).
    #[arg(long)]
    pub tau: Option<String>,
    /// Grid over the time scale instead of a list.
    #[arg(long)]
    pub min: Option<f64>,
    #[arg(long)]
    pub max: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub spacing: Option<String>,
    /// Saturation energy of the tanh profile.
    #[arg(long = "e-sat")]
    pub e_sat: Option<f64>,
    /// Couplings (comma list).
    #[arg(long)]
    pub eps: Option<String>,
    /// Comma list of adiabatic, closed, tdse, or `all`.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long = "tdse-rel-tol")]
    pub tdse_rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "tdse-rel-tol")]
    pub tdse_rel_tol: Option<f64>,
}

fn text_list<T>(s: &Option<String>) -> Option<config::ListValue<T>> {
    s.clone().map(config::ListValue::Text)
}

fn load(common: &CommonArgs, command: &str, flags: RunConfig) -> Result<RunConfig, CliError> {
    let file = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = &file.command {
        if c != command {
            return Err(CliError::Usage(format!("config is for `{c}`, not `{command}`")));
        }
    }
    Ok(file.overlay(flags))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReflectRow {
    pub energy: f64,
    pub method: &'static str,
    pub log_prob: f64,
    pub prob: f64,
    pub err_estimate: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LzRow {
    pub scale: f64,
    pub epsilon: f64,
    pub method: &'static str,
    pub log_prob: f64,
    pub prob: f64,
    pub err_estimate: f64,
}

/// A computed value, or the failure to report for a NaN-flagged row.
type Cell = Result<ReflectionResult, semiref::Error>;

fn values(cell: &Cell) -> (f64, f64, f64) {
    match cell {
        Ok(r) => (r.log_prob, r.prob, r.err_estimate),
        Err(_) => (f64::NAN, f64::NAN, f64::NAN),
    }
}

fn reflect_cell(plan: &ReflectPlan, energy: f64, method: Method) -> Cell {
    let (m, c, q) = (&plan.model, &plan.consts, &plan.quad);
    match method {
        Method::MomentumQuadrature => reflection_momentum_space(m, energy, c, q),
        Method::ClosedForm => reflection_closed_form(m, energy, c),
        Method::ContourLl => reflection_contour_ll(m, energy, c, q),
        Method::ExactHo => exact_ho_reflection(energy, c, m.alpha().unwrap_or(f64::NAN)),
        Method::NumerovOracle => {
            ScatteringGrid::default_for(m, energy, c).and_then(|g| numerov_reflection(m, energy, c, &g))
        }
        Method::Adiabatic | Method::Tdse => Err(semiref::Error::Unsupported("this method in reflect")),
    }
}

/// Rows in grid order, then method name. Failed rows carry NaN and are
/// listed in the returned messages.
pub fn run_reflect(plan: &ReflectPlan) -> (Vec<ReflectRow>, Vec<String>) {
    let cells: Vec<Vec<Cell>> = plan
        .energies
        .par_iter()
        .map(|&e| plan.methods.iter().map(|&m| reflect_cell(plan, e, m)).collect())
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (&energy, per_method) in plan.energies.iter().zip(&cells) {
        for (&method, cell) in plan.methods.iter().zip(per_method) {
            if let Err(e) = cell {
                failures.push(format!("energy={energy} method={method}: {e}"));
            }
            let (log_prob, prob, err_estimate) = values(cell);
            rows.push(ReflectRow {
                energy,
                method: method.name(),
                log_prob,
                prob,
                err_estimate,
            });
        }
    }
    (rows, failures)
}

fn lz_cell(plan: &LzPlan, scale: f64, eps: f64, method: Method) -> Cell {
    let profile = plan.crossing(scale)?;
    let coupling = CouplingSpec::new(eps)?;
    let c = &plan.consts;
    match method {
        Method::Adiabatic => adiabatic_reflection(&profile, &coupling, c, &plan.quad),
        Method::ClosedForm => lz_closed_form(scale, &coupling, c),
        Method::Tdse => {
            let span = semiref::landau_zener::default_t_span(&profile, &coupling, c);
            evolve_tdse(&profile, &coupling, c, span, plan.tdse_rel_tol).map(|o| o.to_result(&coupling))
        }
        _ => Err(semiref::Error::Unsupported("this method in lz")),
    }
}

/// Rows ordered by time scale, then eps, then method name.
pub fn run_lz(plan: &LzPlan) -> (Vec<LzRow>, Vec<String>) {
    let points: Vec<(f64, f64)> = plan
        .scales
        .iter()
        .flat_map(|&s| plan.eps.iter().map(move |&e| (s, e)))
        .collect();
    let cells: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|&(s, e)| plan.methods.iter().map(|&m| lz_cell(plan, s, e, m)).collect())
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (&(scale, epsilon), per_method) in points.iter().zip(&cells) {
        for (&method, cell) in plan.methods.iter().zip(per_method) {
            if let Err(e) = cell {
                failures.push(format!("scale={scale} eps={epsilon} method={method}: {e}"));
            }
            let (log_prob, prob, err_estimate) = values(cell);
            rows.push(LzRow {
                scale,
                epsilon,
                method: method.name(),
                log_prob,
                prob,
                err_estimate,
            });
        }
    }
    (rows, failures)
}

/// Serializes rows. JSON has no NaN, so failed values appear as `null` there.
pub fn render<R: Serialize>(rows: &[R], format: OutputFormat) -> Result<Vec<u8>, CliError> {
    let io = |e: &dyn fmt::Display| CliError::Usage(format!("cannot serialize output: {e}"));
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| io(&e))?;
            }
            w.into_inner().map_err(|e| io(&e))
        }
        OutputFormat::Json => {
            let mut buf = serde_json::to_vec_pretty(rows).map_err(|e| io(&e))?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

/// CSV needs a header even with zero rows; the csv crate only writes it on
/// the first record, so empty tables get it here.
fn render_table<R: Serialize>(rows: &[R], header: &str, format: OutputFormat) -> Result<Vec<u8>, CliError> {
    if rows.is_empty() && format == OutputFormat::Csv {
        return Ok(format!("{header}\n").into_bytes());
    }
    render(rows, format)
}

fn emit(bytes: &[u8], output: &Output) -> Result<(), CliError> {
    match &output.path {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn finish(failures: Vec<String>) -> Result<(), CliError> {
    if failures.is_empty() {
        return Ok(());
    }
    for f in &failures {
        eprintln!("semiref: {f}");
    }
    Err(CliError::Numerical(format!("{} row(s) failed", failures.len())))
}

pub const REFLECT_HEADER: &str = "energy,method,log_prob,prob,err_estimate";
pub const LZ_HEADER: &str = "scale,epsilon,method,log_prob,prob,err_estimate";

pub fn reflect(args: &ReflectArgs) -> Result<(), CliError> {
    let flags = RunConfig {
        model: args.model.clone(),
        alpha: args.alpha,
        v0: args.v0,
        a: args.a,
        emin: args.emin,
        emax: args.emax,
        n: args.n,
        spacing: args.spacing.clone(),
        methods: text_list(&args.methods),
        ..args.common.to_config()
    };
    let cfg = load(&args.common, "reflect", flags)?;
    let plan = config::reflect_plan(&cfg)?;
    let (rows, failures) = run_reflect(&plan);
    emit(&render_table(&rows, REFLECT_HEADER, plan.output.format)?, &plan.output)?;
    finish(failures)
}

pub fn lz(args: &LzArgs) -> Result<(), CliError> {
    let flags = RunConfig {
        profile: args.profile.clone(),
        scale: text_list(&args.t_scale).or_else(|| text_list(&args.tau)),
        min: args.min,
        max: args.max,
        n: args.n,
        spacing: args.spacing.clone(),
        e_sat: args.e_sat,
        eps: text_list(&args.eps),
        methods: text_list(&args.methods),
        tdse_rel_tol: args.tdse_rel_tol,
        ..args.common.to_config()
    };
    let cfg = load(&args.common, "lz", flags)?;
    let plan = config::lz_plan(&cfg)?;
    let (rows, failures) = run_lz(&plan);
    emit(&render_table(&rows, LZ_HEADER, plan.output.format)?, &plan.output)?;
    finish(failures)
}

pub fn validate(args: &ValidateArgs) -> Result<(), CliError> {
    let flags = RunConfig {
        tdse_rel_tol: args.tdse_rel_tol,
        ..args.common.to_config()
    };
    let cfg = load(&args.common, "validate", flags)?;
    let vcfg = ValidationConfig {
        consts: config::constants(&cfg)?,
        quad: config::quadrature(&cfg)?,
        tdse_rel_tol: config::tdse_rel_tol(&cfg)?,
        energies: log_spaced(0.1, 5.0, 20),
    };
    let output = config::output(&cfg)?;
    let report = run_validation(&vcfg);
    let bytes = match output.format {
        OutputFormat::Json => {
            let mut b = serde_json::to_vec_pretty(&report.checks)
                .map_err(|e| CliError::Usage(format!("cannot serialize report: {e}")))?;
            b.push(b'\n');
            b
        }
        OutputFormat::Csv => {
            let mut s = String::new();
            for c in &report.checks {
                s.push_str(&format!("{c}\n"));
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!("{} checks, {failed} failed\n", report.checks.len()));
            s.into_bytes()
        }
    };
    emit(&bytes, &output)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Numerical("validation checks failed".into()))
    }
}

/// Parses `argv`, runs the command, and maps the outcome to an exit status.
pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Reflect(a) => reflect(a),
        Command::Lz(a) => lz(a),
        Command::Validate(a) => validate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semiref: {e}");
            e.exit_code()
        }
    }
}
