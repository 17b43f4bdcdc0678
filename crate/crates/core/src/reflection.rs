//! Semiclassical above-barrier reflection probabilities.
//!
//! The primary route integrates `Im V⁻¹(E − p²/2m)` across the classically
//! forbidden momentum zone `|p| < √(2mE)`:
//!
//! ```text
//! ln |R|² = −(2/ℏ) ∫_{−p₀}^{p₀} dp Im V⁻¹(E − p²/2m)
//! ```
//!
//! The coordinate-space route integrates the local momentum along the
//! imaginary axis up to the complex turning point `iy₀`:
//!
//! ```text
//! ln |R|² = −(4/ℏ) ∫₀^{y₀} dy √(2m(E − V(iy)))
//! ```
//!
//! The two are related by integration by parts (`∫p dy = ∫y dp`) and must
//! agree to quadrature accuracy.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{require_energy, PhysicalConstants, PotentialModel, PotentialKind};
use crate::quadrature::{forbidden_zone_integral, integrate_refined, Estimate, QuadratureSpec};
use crate::specfun::{elliptic_e, elliptic_k};

/// Relative tolerance used to locate the imaginary turning point.
pub const TURNING_POINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Momentum-space tunneling integral.
    #[serde(rename = "momentum")]
    MomentumQuadrature,
    /// Per-model closed form (also the Landau-Zener formula).
    #[serde(rename = "closed")]
    ClosedForm,
    /// Coordinate-space contour integral along the imaginary axis.
    #[serde(rename = "contour")]
    ContourLl,
    /// Exact inverted-oscillator result.
    #[serde(rename = "exact")]
    ExactHo,
    /// Direct numerical solution of the scattering problem.
    #[serde(rename = "numerov")]
    NumerovOracle,
    /// Adiabatic transition formula for a two-level crossing.
    Adiabatic,
    /// Direct integration of the two-level Schrödinger equation.
    Tdse,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::MomentumQuadrature,
        Method::ClosedForm,
        Method::ContourLl,
        Method::ExactHo,
        Method::NumerovOracle,
        Method::Adiabatic,
        Method::Tdse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::MomentumQuadrature => "momentum",
            Method::ClosedForm => "closed",
            Method::ContourLl => "contour",
            Method::ExactHo => "exact",
            Method::NumerovOracle => "numerov",
            Method::Adiabatic => "adiabatic",
            Method::Tdse => "tdse",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// One reflection (or transition) probability. `prob == exp(log_prob)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionResult {
    pub energy: f64,
    pub log_prob: f64,
    pub prob: f64,
    pub method: Method,
    pub err_estimate: f64,
}

impl ReflectionResult {
    /// Builds a result from a log-probability, clamping round-off above zero.
    pub fn from_log(energy: f64, log_prob: f64, method: Method, err_estimate: f64) -> Self {
        let log_prob = log_prob.min(0.0);
        Self {
            energy,
            log_prob,
            prob: log_prob.exp(),
            method,
            err_estimate: err_estimate.abs(),
        }
    }
}

/// Scales an action integral into a log-probability, carrying the best
/// estimate through a convergence failure.
fn scale_estimate(est: Result<Estimate>, factor: f64) -> Result<(f64, f64)> {
    match est {
        Ok(e) => Ok((-factor * e.value, factor * e.err)),
        Err(Error::NotConverged { what, best, err }) => Err(Error::NotConverged {
            what,
            best: -factor * best,
            err: factor * err,
        }),
        Err(e) => Err(e),
    }
}

/// Reflection probability from the momentum-space tunneling integral.
pub fn reflection_momentum_space(
    model: &PotentialModel,
    energy: f64,
    consts: &PhysicalConstants,
    quad: &QuadratureSpec,
) -> Result<ReflectionResult> {
    require_energy("reflection_momentum_space", energy)?;
    let limits = model.p_limits(energy, consts)?;
    let two_m = 2.0 * consts.mass();
    let est = forbidden_zone_integral(
        "momentum-space integral",
        limits.p0,
        |p| model.im_v_inverse_unchecked((energy - p * p / two_m).max(0.0)),
        quad,
    );
    let (log_prob, err) = scale_estimate(est, 2.0 / consts.hbar())?;
    Ok(ReflectionResult::from_log(energy, log_prob, Method::MomentumQuadrature, err))
}

/// Closed-form reflection probability for each built-in barrier.
///
/// * InverseHO: `−2πE/(ℏω)`, `ω = √(α/m)`
/// * Sech2: `−(2πa/ℏ)√(2m)(√(E+V₀) − √V₀)`
/// * Lorentzian: `−(4a/ℏ)√(2mE/(1+γ))((1+γ)E(μ) − γK(μ))`, `γ = V₀/E`,
///   `μ = 1/(1+γ)` taken as the elliptic *parameter*.
pub fn reflection_closed_form(
    model: &PotentialModel,
    energy: f64,
    consts: &PhysicalConstants,
) -> Result<ReflectionResult> {
    require_energy("reflection_closed_form", energy)?;
    let (hbar, m) = (consts.hbar(), consts.mass());
    let log_prob = match model.kind() {
        PotentialKind::InverseHo => {
            let omega = low_energy_effective_omega(model, consts);
            -2.0 * PI * energy / (hbar * omega)
        }
        PotentialKind::Sech2 => {
            let v0 = model.depth().expect("sech2 has a depth");
            let a = model.width().expect("sech2 has a width");
            // √(E+V₀) − √V₀ = E / (√(E+V₀) + √V₀), no cancellation at small E.
            let diff = energy / ((energy + v0).sqrt() + v0.sqrt());
            -2.0 * PI * a / hbar * (2.0 * m).sqrt() * diff
        }
        PotentialKind::Lorentzian => {
            let v0 = model.depth().expect("lorentzian has a depth");
            let a = model.width().expect("lorentzian has a width");
            let gamma = v0 / energy;
            let mu = 1.0 / (1.0 + gamma);
            let bracket = (1.0 + gamma) * elliptic_e(mu)? - gamma * elliptic_k(mu)?;
            -4.0 * a / hbar * (2.0 * m * energy / (1.0 + gamma)).sqrt() * bracket
        }
    };
    Ok(ReflectionResult::from_log(energy, log_prob, Method::ClosedForm, 0.0))
}

/// Reflection probability from the contour integral along the imaginary axis.
///
/// Uses `y = y₀ sin²φ`, which makes the `√(y₀ − y)` endpoint analytic.
pub fn reflection_contour_ll(
    model: &PotentialModel,
    energy: f64,
    consts: &PhysicalConstants,
    quad: &QuadratureSpec,
) -> Result<ReflectionResult> {
    require_energy("reflection_contour_ll", energy)?;
    let y0 = model.imaginary_turning_point(energy, consts, TURNING_POINT_TOL)?;
    let two_m = 2.0 * consts.mass();
    let est = integrate_refined(
        "contour integral",
        |phi: f64| {
            let (s, c) = phi.sin_cos();
            let y = y0 * s * s;
            let p = (two_m * (energy - model.v_on_imaginary_axis_unchecked(y)).max(0.0)).sqrt();
            p * 2.0 * y0 * s * c
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        quad,
    );
    let (log_prob, err) = scale_estimate(est, 4.0 / consts.hbar())?;
    Ok(ReflectionResult::from_log(energy, log_prob, Method::ContourLl, err))
}

/// `ω_eff = √(−V″(0)/m)`, the frequency of the inverted oscillator that
/// osculates the barrier top.
pub fn low_energy_effective_omega(model: &PotentialModel, consts: &PhysicalConstants) -> f64 {
    (model.curvature() / consts.mass()).sqrt()
}

/// The universal small-energy limit `−2πE/(ℏ ω_eff)` of the log-probability.
pub fn low_energy_log_prob(model: &PotentialModel, energy: f64, consts: &PhysicalConstants) -> f64 {
    -2.0 * PI * energy / (consts.hbar() * low_energy_effective_omega(model, consts))
}
