//! Adiabatic transitions in a two-level system, treated as reflection above
//! a barrier in time.
//!
//! The Hamiltonian is `H(t) = [[f(t), ε], [ε, −f(t)]]`. Eliminating the lower
//! amplitude turns the Schrödinger equation into a scattering problem for a
//! particle with `2m = 1` and energy `ε²` over the barrier `−f²(t)`, so the
//! transition probability follows from the same forbidden-zone integral used
//! for spatial barriers:
//!
//! ```text
//! ln P = −(2/ℏ) ∫_{−ε}^{ε} dp Im f⁻¹(i√(ε² − p²))
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};
use crate::ode::{self, Tolerances};
use crate::potentials::PhysicalConstants;
use crate::quadrature::{forbidden_zone_integral, QuadratureSpec};
use crate::reflection::{Method, ReflectionResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Linear,
    Tanh,
}

impl std::str::FromStr for ProfileKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(ProfileKind::Linear),
            "tanh" => Ok(ProfileKind::Tanh),
            other => Err(format!("unknown profile `{other}` (expected linear or tanh)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Profile {
    Linear { t_scale: f64 },
    Tanh { tau: f64, e_sat: f64 },
}

/// Odd, increasing diagonal element `f(t)` of the two-level Hamiltonian.
///
/// Only `f²` and `|f⁻¹|` enter the transition probability, so the increasing
/// orientation is equivalent to a decreasing one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingProfile {
    profile: Profile,
}

impl CrossingProfile {
    /// `f(t) = t/T`.
    pub fn linear(t_scale: f64) -> Result<Self> {
        Ok(Self {
            profile: Profile::Linear {
                t_scale: require_positive("T", t_scale)?,
            },
        })
    }

    /// `f(t) = E_sat·tanh(t/τ)`.
    pub fn tanh(tau: f64, e_sat: f64) -> Result<Self> {
        Ok(Self {
            profile: Profile::Tanh {
                tau: require_positive("tau", tau)?,
                e_sat: require_positive("e_sat", e_sat)?,
            },
        })
    }

    pub fn kind(&self) -> ProfileKind {
        match self.profile {
            Profile::Linear { .. } => ProfileKind::Linear,
            Profile::Tanh { .. } => ProfileKind::Tanh,
        }
    }

    /// `T` for the linear profile, `τ` for tanh.
    pub fn time_scale(&self) -> f64 {
        match self.profile {
            Profile::Linear { t_scale } => t_scale,
            Profile::Tanh { tau, .. } => tau,
        }
    }

    pub fn saturation(&self) -> Option<f64> {
        match self.profile {
            Profile::Linear { .. } => None,
            Profile::Tanh { e_sat, .. } => Some(e_sat),
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        match self.profile {
            Profile::Linear { t_scale } => t / t_scale,
            Profile::Tanh { tau, e_sat } => e_sat * (t / tau).tanh(),
        }
    }

    /// `∫₀ᵗ f(t′) dt′`.
    pub fn f_integral(&self, t: f64) -> f64 {
        match self.profile {
            Profile::Linear { t_scale } => 0.5 * t * t / t_scale,
            Profile::Tanh { tau, e_sat } => {
                // ln cosh x = |x| + ln(1 + e^{−2|x|}) − ln 2
                let x = (t / tau).abs();
                e_sat * tau * (x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2)
            }
        }
    }

    /// `Im f⁻¹(iu)` for `u ≥ 0`, the analytic continuation of the inverse
    /// profile onto the imaginary axis.
    pub fn im_f_inverse(&self, u: f64) -> f64 {
        match self.profile {
            Profile::Linear { t_scale } => t_scale * u,
            // atanh(iu/E) = i·atan(u/E)
            Profile::Tanh { tau, e_sat } => tau * (u / e_sat).atan(),
        }
    }
}

/// Off-diagonal coupling `ε > 0`; the instantaneous gap never closes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    epsilon: f64,
}

impl CouplingSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        Ok(Self {
            epsilon: require_positive("epsilon", epsilon)?,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `Ē = √(E² + ε²)` for a profile saturating at `±E`.
    pub fn asymptotic_energy(&self, saturation: f64) -> f64 {
        saturation.hypot(self.epsilon)
    }
}

/// Amplitudes `(a, b)` in the diabatic basis at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    pub a: Complex64,
    pub b: Complex64,
    pub t: f64,
}

impl TwoLevelState {
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    /// `|⟨φ|ψ⟩|²` for a real unit vector `φ`.
    pub fn population(&self, phi: [f64; 2]) -> f64 {
        (self.a * phi[0] + self.b * phi[1]).norm_sqr()
    }
}

/// Mixing angle `θ ∈ (0, π)` with `tan θ = ε/f(t)`.
pub fn mixing_angle(profile: &CrossingProfile, eps: &CouplingSpec, t: f64) -> f64 {
    eps.epsilon.atan2(profile.f(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem {
    pub e_plus: f64,
    pub e_minus: f64,
    /// `(cos θ/2, sin θ/2)`
    pub phi_plus: [f64; 2],
    /// `(−sin θ/2, cos θ/2)`
    pub phi_minus: [f64; 2],
}

pub fn instantaneous_eigensystem(profile: &CrossingProfile, eps: &CouplingSpec, t: f64) -> Eigensystem {
    let f = profile.f(t);
    let energy = f.hypot(eps.epsilon);
    let half = 0.5 * eps.epsilon.atan2(f);
    let (s, c) = half.sin_cos();
    Eigensystem {
        e_plus: energy,
        e_minus: -energy,
        phi_plus: [c, s],
        phi_minus: [-s, c],
    }
}

/// Semiclassical transition probability for an arbitrary odd profile.
pub fn adiabatic_reflection(
    profile: &CrossingProfile,
    eps: &CouplingSpec,
    consts: &PhysicalConstants,
    quad: &QuadratureSpec,
) -> Result<ReflectionResult> {
    let epsilon = eps.epsilon;
    if let Some(e_sat) = profile.saturation() {
        if epsilon >= e_sat {
            return Err(Error::Domain {
                what: "adiabatic_reflection",
                value: epsilon,
                reason: "tanh profile needs epsilon < e_sat for an avoided crossing",
            });
        }
    }
    let est = forbidden_zone_integral(
        "adiabatic transition integral",
        epsilon,
        |p| profile.im_f_inverse((epsilon * epsilon - p * p).max(0.0).sqrt()),
        quad,
    );
    let factor = 2.0 / consts.hbar();
    match est {
        Ok(e) => Ok(ReflectionResult::from_log(epsilon, -factor * e.value, Method::Adiabatic, factor * e.err)),
        Err(Error::NotConverged { what, best, err }) => Err(Error::NotConverged {
            what,
            best: -factor * best,
            err: factor * err,
        }),
        Err(e) => Err(e),
    }
}

/// The Landau–Zener formula `exp(−πTε²/ℏ)` for `f(t) = t/T`.
pub fn lz_closed_form(t_scale: f64, eps: &CouplingSpec, consts: &PhysicalConstants) -> Result<ReflectionResult> {
    require_positive("T", t_scale)?;
    let log_prob = -PI * t_scale * eps.epsilon * eps.epsilon / consts.hbar();
    Ok(ReflectionResult::from_log(eps.epsilon, log_prob, Method::ClosedForm, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdseOutcome {
    /// Population of the upper adiabatic state at the final time.
    pub trans_prob: f64,
    /// Population of the lower adiabatic state at the final time.
    pub refl_prob: f64,
    pub max_norm_drift: f64,
    pub steps: usize,
}

impl TdseOutcome {
    pub fn to_result(&self, eps: &CouplingSpec) -> ReflectionResult {
        ReflectionResult::from_log(eps.epsilon, self.refl_prob.ln(), Method::Tdse, self.max_norm_drift)
    }
}

/// Default TDSE tolerance.
pub const DEFAULT_TDSE_REL_TOL: f64 = 1e-10;

/// Symmetric window `±20·max(scale, ℏ/ε)`; for the linear profile it is also
/// widened so that `|f| ≥ 20ε` at both ends.
pub fn default_t_span(profile: &CrossingProfile, eps: &CouplingSpec, consts: &PhysicalConstants) -> (f64, f64) {
    let mut half = 20.0 * profile.time_scale().max(consts.hbar() / eps.epsilon);
    if profile.kind() == ProfileKind::Linear {
        half = half.max(20.0 * eps.epsilon * profile.time_scale());
    }
    (-half, half)
}

fn check_window(profile: &CrossingProfile, eps: &CouplingSpec, t_span: (f64, f64)) -> Result<()> {
    let (t0, t1) = t_span;
    if !(t0 < t1) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::Domain {
            what: "evolve_tdse",
            value: t1 - t0,
            reason: "t_span must be a finite increasing interval",
        });
    }
    for t in [t0, t1] {
        let ok = match profile.profile {
            Profile::Linear { .. } => profile.f(t).abs() >= 20.0 * eps.epsilon,
            Profile::Tanh { e_sat, .. } => {
                let asymptote = eps.epsilon.atan2(e_sat * t.signum());
                (mixing_angle(profile, eps, t) - asymptote).abs() <= 1e-6
            }
        };
        if !ok {
            return Err(Error::Domain {
                what: "evolve_tdse",
                value: t,
                reason: "window edge is not in the asymptotic region",
            });
        }
    }
    Ok(())
}

/// Integrates the exact two-level equations from `φ₊(t_start)` and projects
/// the final state on the instantaneous eigenvectors.
pub fn evolve_tdse(
    profile: &CrossingProfile,
    eps: &CouplingSpec,
    consts: &PhysicalConstants,
    t_span: (f64, f64),
    rel_tol: f64,
) -> Result<TdseOutcome> {
    evolve_tdse_observed(profile, eps, consts, t_span, rel_tol, |_| {})
}

/// [`evolve_tdse`] with a callback after every accepted step.
pub fn evolve_tdse_observed<O: FnMut(&TwoLevelState)>(
    profile: &CrossingProfile,
    eps: &CouplingSpec,
    consts: &PhysicalConstants,
    t_span: (f64, f64),
    rel_tol: f64,
    mut observe: O,
) -> Result<TdseOutcome> {
    require_positive("rel_tol", rel_tol)?;
    check_window(profile, eps, t_span)?;
    let (t0, t1) = t_span;
    let epsilon = eps.epsilon;
    let inv_hbar = 1.0 / consts.hbar();

    let start = instantaneous_eigensystem(profile, eps, t0).phi_plus;
    let phase = |t: f64| profile.f_integral(t) * inv_hbar;

    // Rotating frame a = ã e^{−iΦ}, b = b̃ e^{iΦ}, Φ = ∫f/ℏ:
    //   iℏ dã/dt = ε e^{2iΦ} b̃,  iℏ db̃/dt = ε e^{−2iΦ} ã
    // y = [Re ã, Im ã, Re b̃, Im b̃]
    let rot0 = Complex64::from_polar(1.0, phase(t0));
    let (a0, b0) = (rot0 * start[0], rot0.conj() * start[1]);
    let y0 = [a0.re, a0.im, b0.re, b0.im];

    let rhs = |t: f64, y: &[f64; 4]| {
        let w = Complex64::from_polar(epsilon * inv_hbar, 2.0 * phase(t));
        let a = Complex64::new(y[0], y[1]);
        let b = Complex64::new(y[2], y[3]);
        let da = -Complex64::i() * w * b;
        let db = -Complex64::i() * w.conj() * a;
        [da.re, da.im, db.re, db.im]
    };
    let to_state = |t: f64, y: &[f64; 4]| {
        let rot = Complex64::from_polar(1.0, -phase(t));
        TwoLevelState {
            a: rot * Complex64::new(y[0], y[1]),
            b: rot.conj() * Complex64::new(y[2], y[3]),
            t,
        }
    };

    let mut max_drift = 0.0_f64;
    // Local error control a decade below the requested tolerance keeps the
    // accumulated drift well inside the 100·rel_tol budget.
    let tol = Tolerances {
        rel: 0.1 * rel_tol,
        abs: 0.1 * rel_tol,
    };
    let (y, stats) = ode::integrate(rhs, t0, t1, y0, tol, |t, y| {
        let state = to_state(t, y);
        max_drift = max_drift.max((state.norm_sqr() - 1.0).abs());
        observe(&state);
    })?;

    let limit = 100.0 * rel_tol;
    if max_drift > limit {
        return Err(Error::NormDrift {
            drift: max_drift,
            limit,
        });
    }
    let end = instantaneous_eigensystem(profile, eps, t1);
    let state = to_state(t1, &y);
    Ok(TdseOutcome {
        trans_prob: state.population(end.phi_plus),
        refl_prob: state.population(end.phi_minus),
        max_norm_drift: max_drift,
        steps: stats.accepted,
    })
}
