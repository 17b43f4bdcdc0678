//! Run configuration: a flat TOML file merged with command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use semiref::{
    CrossingProfile, Method, PhysicalConstants, PotentialKind, PotentialModel, ProfileKind,
    QuadratureSpec,
};

use crate::CliError;

/// A list value written either as a TOML array, a single scalar, or a
/// comma-separated string.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ListValue<T> {
    One(T),
    Many(Vec<T>),
    Text(String),
}

impl<T: std::str::FromStr + Clone> ListValue<T> {
    fn into_vec(self, key: &str) -> Result<Vec<T>, CliError> {
        match self {
            ListValue::One(v) => Ok(vec![v]),
            ListValue::Many(v) => Ok(v),
            ListValue::Text(s) => parse_list(&s).map_err(|e| CliError::Usage(format!("`{key}`: {e}"))),
        }
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| format!("cannot parse `{p}`")))
        .collect()
}

/// Every key is optional; flags fill in or override what the file sets.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,

    pub model: Option<String>,
    pub alpha: Option<f64>,
    pub v0: Option<f64>,
    pub a: Option<f64>,

    pub profile: Option<String>,
    /// T (linear) or τ (tanh) values.
    pub scale: Option<ListValue<f64>>,
    pub e_sat: Option<f64>,
    pub eps: Option<ListValue<f64>>,

    pub min: Option<f64>,
    pub max: Option<f64>,
    pub emin: Option<f64>,
    pub emax: Option<f64>,
    pub n: Option<usize>,
    pub spacing: Option<String>,

    pub methods: Option<ListValue<String>>,

    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub nodes: Option<usize>,
    pub levels: Option<usize>,
    pub rel_tol: Option<f64>,
    pub tdse_rel_tol: Option<f64>,

    pub output: Option<String>,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Fields set in `flags` win over `self`.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: flags.$f.or(self.$f)),* } };
        }
        pick!(
            command, model, alpha, v0, a, profile, scale, e_sat, eps, min, max, emin, emax, n, spacing, methods,
            hbar, mass, nodes, levels, rel_tol, tdse_rel_tol, output, output_path
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub format: OutputFormat,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct ReflectPlan {
    pub model: PotentialModel,
    pub energies: Vec<f64>,
    pub methods: Vec<Method>,
    pub consts: PhysicalConstants,
    pub quad: QuadratureSpec,
    pub output: Output,
}

#[derive(Debug, Clone)]
pub struct LzPlan {
    pub profile: ProfileKind,
    pub e_sat: Option<f64>,
    pub scales: Vec<f64>,
    pub eps: Vec<f64>,
    pub methods: Vec<Method>,
    pub consts: PhysicalConstants,
    pub quad: QuadratureSpec,
    pub tdse_rel_tol: f64,
    pub output: Output,
}

impl LzPlan {
    pub fn crossing(&self, scale: f64) -> semiref::Result<CrossingProfile> {
        match self.profile {
            ProfileKind::Linear => CrossingProfile::linear(scale),
            ProfileKind::Tanh => CrossingProfile::tanh(scale, self.e_sat.unwrap_or(1.0)),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn lib_usage(e: semiref::Error) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn grid(min: f64, max: Option<f64>, n: usize, spacing: Spacing) -> Result<Vec<f64>, CliError> {
    if n == 0 {
        return Err(usage("grid count must be at least 1"));
    }
    if !min.is_finite() {
        return Err(usage("grid minimum must be finite"));
    }
    if n == 1 {
        if let Some(max) = max {
            if max < min {
                return Err(usage(format!("grid max {max} is below min {min}")));
            }
        }
        return Ok(vec![min]);
    }
    let max = max.ok_or_else(|| usage("grid max is required when n > 1"))?;
    if !(max.is_finite() && min < max) {
        return Err(usage(format!("grid needs min < max, got {min} and {max}")));
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    Ok(match spacing {
        Spacing::Linear => (0..n).map(|i| min + (max - min) * step(i)).collect(),
        Spacing::Log => {
            if min <= 0.0 {
                return Err(usage("log spacing needs a positive minimum"));
            }
            let (lo, hi) = (min.ln(), max.ln());
            (0..n)
                .map(|i| match i {
                    0 => min,
                    _ if i == n - 1 => max,
                    _ => (lo + (hi - lo) * step(i)).exp(),
                })
                .collect()
        }
    })
}

fn spacing(cfg: &RunConfig) -> Result<Spacing, CliError> {
    match cfg.spacing.as_deref().unwrap_or("linear").to_ascii_lowercase().as_str() {
        "linear" | "lin" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        other => Err(usage(format!("unknown spacing `{other}` (expected linear or log)"))),
    }
}

pub fn constants(cfg: &RunConfig) -> Result<PhysicalConstants, CliError> {
    PhysicalConstants::new(cfg.hbar.unwrap_or(1.0), cfg.mass.unwrap_or(1.0)).map_err(lib_usage)
}

pub fn quadrature(cfg: &RunConfig) -> Result<QuadratureSpec, CliError> {
    let d = QuadratureSpec::default();
    QuadratureSpec::new(
        cfg.nodes.unwrap_or(d.nodes()),
        cfg.levels.unwrap_or(d.refinement_levels()),
        cfg.rel_tol.unwrap_or(d.rel_tol()),
    )
    .map_err(lib_usage)
}

pub fn tdse_rel_tol(cfg: &RunConfig) -> Result<f64, CliError> {
    let tol = cfg.tdse_rel_tol.unwrap_or(semiref::landau_zener::DEFAULT_TDSE_REL_TOL);
    if tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(usage(format!("tdse_rel_tol must lie in (0, 1), got {tol}")))
    }
}

pub fn output(cfg: &RunConfig) -> Result<Output, CliError> {
    let from_ext = cfg
        .output_path
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let name = cfg.output.clone().map(|s| s.to_ascii_lowercase()).or(from_ext);
    let format = match name.as_deref() {
        None | Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => return Err(usage(format!("unknown output format `{other}` (expected csv or json)"))),
    };
    Ok(Output {
        format,
        path: cfg.output_path.clone(),
    })
}

/// Parses the method list. `all` expands to `all_methods`.
fn methods(cfg: &RunConfig, default: &[Method], all_methods: &[Method]) -> Result<Vec<Method>, CliError> {
    let names = match cfg.methods.clone() {
        None => return Ok(default.to_vec()),
        Some(v) => v.into_vec("methods")?,
    };
    let mut out = Vec::new();
    for name in names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        if name.eq_ignore_ascii_case("all") {
            out.extend_from_slice(all_methods);
        } else {
            out.push(name.parse::<Method>().map_err(usage)?);
        }
    }
    if out.is_empty() {
        return Err(usage("method list is empty"));
    }
    out.sort_by_key(|m| m.name());
    out.dedup();
    Ok(out)
}

fn require<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("missing `{what}`")))
}

pub fn reflect_plan(cfg: &RunConfig) -> Result<ReflectPlan, CliError> {
    let kind: PotentialKind = require(cfg.model.as_deref(), "model")?.parse().map_err(usage)?;
    let model = match kind {
        PotentialKind::InverseHo => PotentialModel::inverse_ho(cfg.alpha.unwrap_or(1.0)),
        PotentialKind::Sech2 => PotentialModel::sech2(cfg.v0.unwrap_or(1.0), cfg.a.unwrap_or(1.0)),
        PotentialKind::Lorentzian => PotentialModel::lorentzian(cfg.v0.unwrap_or(1.0), cfg.a.unwrap_or(1.0)),
    }
    .map_err(lib_usage)?;

    let all: &[Method] = match kind {
        PotentialKind::InverseHo => &[Method::ClosedForm, Method::ContourLl, Method::ExactHo, Method::MomentumQuadrature],
        _ => &[Method::ClosedForm, Method::ContourLl, Method::MomentumQuadrature, Method::NumerovOracle],
    };
    let methods = methods(cfg, &[Method::ClosedForm, Method::MomentumQuadrature], all)?;
    for m in &methods {
        match m {
            Method::NumerovOracle if kind == PotentialKind::InverseHo => {
                return Err(usage("numerov is not available for inverse_ho (the potential is unbounded)"))
            }
            Method::ExactHo if kind != PotentialKind::InverseHo => {
                return Err(usage("exact is only available for inverse_ho"))
            }
            Method::Adiabatic | Method::Tdse => {
                return Err(usage(format!("method `{m}` belongs to the lz command")))
            }
            _ => {}
        }
    }

    let n = cfg.n.unwrap_or(50);
    let emax = if n == 1 { cfg.emax } else { cfg.emax.or(Some(5.0)) };
    let energies = grid(cfg.emin.unwrap_or(0.1), emax, n, spacing(cfg)?)?;
    if energies.iter().any(|&e| e <= 0.0) {
        return Err(usage("energies must be positive"));
    }

    Ok(ReflectPlan {
        model,
        energies,
        methods,
        consts: constants(cfg)?,
        quad: quadrature(cfg)?,
        output: output(cfg)?,
    })
}

pub fn lz_plan(cfg: &RunConfig) -> Result<LzPlan, CliError> {
    let profile: ProfileKind = cfg.profile.as_deref().unwrap_or("linear").parse().map_err(usage)?;
    let e_sat = match profile {
        ProfileKind::Linear => {
            if cfg.e_sat.is_some() {
                return Err(usage("e_sat only applies to the tanh profile"));
            }
            None
        }
        ProfileKind::Tanh => {
            let e = cfg.e_sat.unwrap_or(1.0);
            if !(e.is_finite() && e > 0.0) {
                return Err(usage(format!("e_sat must be positive, got {e}")));
            }
            Some(e)
        }
    };

    let all: &[Method] = match profile {
        ProfileKind::Linear => &[Method::Adiabatic, Method::ClosedForm, Method::Tdse],
        ProfileKind::Tanh => &[Method::Adiabatic, Method::Tdse],
    };
    let methods = methods(cfg, all, all)?;
    for m in &methods {
        let ok = matches!(m, Method::Adiabatic | Method::Tdse)
            || (*m == Method::ClosedForm && profile == ProfileKind::Linear);
        if !ok {
            return Err(usage(format!("method `{m}` is not available for the {profile:?} profile").to_lowercase()));
        }
    }

    let scales = match cfg.scale.clone() {
        Some(v) => v.into_vec("scale")?,
        None => match cfg.min {
            Some(min) => grid(min, cfg.max, cfg.n.unwrap_or(1), spacing(cfg)?)?,
            None => return Err(usage("missing time scale (--T/--tau, or min/max/n)")),
        },
    };
    let eps = require(cfg.eps.clone(), "eps")?.into_vec("eps")?;
    if scales.is_empty() || eps.is_empty() {
        return Err(usage("time-scale and eps lists must be non-empty"));
    }
    for (what, v) in scales.iter().map(|v| ("time scale", v)).chain(eps.iter().map(|v| ("eps", v))) {
        if !(v.is_finite() && *v > 0.0) {
            return Err(usage(format!("{what} must be positive, got {v}")));
        }
    }

    Ok(LzPlan {
        profile,
        e_sat,
        scales,
        eps,
        methods,
        consts: constants(cfg)?,
        quad: quadrature(cfg)?,
        tdse_rel_tol: tdse_rel_tol(cfg)?,
        output: output(cfg)?,
    })
}
