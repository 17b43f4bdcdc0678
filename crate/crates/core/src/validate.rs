//! Invariant suite behind `semiref validate`.
//!
//! Each check records the worst measured value against its threshold so the
//! report shows margins, not just pass/fail.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::Serialize;

use crate::landau_zener::{
    adiabatic_reflection, default_t_span, evolve_tdse, lz_closed_form, CouplingSpec, CrossingProfile,
    DEFAULT_TDSE_REL_TOL,
};
use crate::potentials::{PhysicalConstants, PotentialModel};
use crate::quadrature::QuadratureSpec;
use crate::reflection::{
    low_energy_log_prob, reflection_closed_form, reflection_contour_ll, reflection_momentum_space,
};
use crate::scattering::{exact_ho_reflection, numerov_scatter, ScatteringGrid};
use crate::specfun::{elliptic_e, elliptic_k};
use crate::Result;

pub const CROSS_METHOD_TOL: f64 = 1e-6;
pub const CLOSED_FORM_TOL: f64 = 1e-8;
pub const CLOSED_FORM_LORENTZIAN_TOL: f64 = 1e-6;
pub const HBAR_SCALING_TOL: f64 = 1e-8;
pub const UNIVERSALITY_TOL: f64 = 0.01;
pub const LEGENDRE_TOL: f64 = 1e-12;
pub const UNITARITY_TOL: f64 = 1e-6;
pub const LZ_CLOSED_FORM_TOL: f64 = 1e-10;
pub const EXACT_HO_RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    pub consts: PhysicalConstants,
    pub quad: QuadratureSpec,
    pub tdse_rel_tol: f64,
    /// Energy grid for the barrier checks.
    pub energies: Vec<f64>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            consts: PhysicalConstants::default(),
            quad: QuadratureSpec::default(),
            tdse_rel_tol: DEFAULT_TDSE_REL_TOL,
            energies: log_spaced(0.1, 5.0, 20),
        }
    }
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst value observed; compared against `threshold`.
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<26} measured {:<11.3e} threshold {:<9.1e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Check whose measurement must stay at or below the threshold. Any
/// numerical error along the way fails it.
fn bounded(name: &'static str, threshold: f64, run: impl FnOnce() -> Result<(f64, String)>) -> CheckOutcome {
    match run() {
        Ok((measured, detail)) => CheckOutcome {
            name,
            passed: measured <= threshold,
            measured,
            threshold,
            detail,
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            measured: f64::INFINITY,
            threshold,
            detail: format!("error: {e}"),
        },
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn unit_models() -> [PotentialModel; 3] {
    [
        PotentialModel::inverse_ho(1.0).expect("valid"),
        PotentialModel::sech2(1.0, 1.0).expect("valid"),
        PotentialModel::lorentzian(1.0, 1.0).expect("valid"),
    ]
}

pub fn run_validation(cfg: &ValidationConfig) -> ValidationReport {
    let c = &cfg.consts;
    let q = &cfg.quad;
    let models = unit_models();
    let mut checks = Vec::new();

    checks.push(bounded("quadrature_convergence", q.rel_tol(), || {
        let mut worst = 0.0_f64;
        for m in &models {
            for &e in &cfg.energies {
                for r in [reflection_momentum_space(m, e, c, q)?, reflection_contour_ll(m, e, c, q)?] {
                    worst = worst.max(r.err_estimate / r.log_prob.abs());
                }
            }
        }
        Ok((worst, "max err_estimate / |log_prob|".into()))
    }));

    checks.push(bounded("cross_method_equality", CROSS_METHOD_TOL, || {
        let mut worst = 0.0_f64;
        for m in &models {
            for &e in &cfg.energies {
                let p = reflection_momentum_space(m, e, c, q)?;
                let l = reflection_contour_ll(m, e, c, q)?;
                worst = worst.max(rel_diff(l.log_prob, p.log_prob));
            }
        }
        Ok((worst, "momentum vs contour, relative on log_prob".into()))
    }));

    for (name, tol, model) in [
        ("closed_form_inverse_ho", CLOSED_FORM_TOL, models[0]),
        ("closed_form_sech2", CLOSED_FORM_TOL, models[1]),
        ("closed_form_lorentzian", CLOSED_FORM_LORENTZIAN_TOL, models[2]),
    ] {
        checks.push(bounded(name, tol, || {
            let mut worst = 0.0_f64;
            for &e in &cfg.energies {
                let p = reflection_momentum_space(&model, e, c, q)?;
                let cf = reflection_closed_form(&model, e, c)?;
                worst = worst.max(rel_diff(p.log_prob, cf.log_prob));
            }
            Ok((worst, "quadrature vs closed form".into()))
        }));
    }

    checks.push(bounded("monotonicity", 0.0, || {
        let mut sorted = cfg.energies.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        // Largest step log_prob(E_{i+1}) − log_prob(E_i); must be negative.
        let mut worst = f64::NEG_INFINITY;
        for m in &models {
            let logs = sorted
                .iter()
                .map(|&e| reflection_momentum_space(m, e, c, q).map(|r| r.log_prob))
                .collect::<Result<Vec<_>>>()?;
            for w in logs.windows(2) {
                worst = worst.max(w[1] - w[0]);
            }
        }
        // Strictly decreasing: report a zero step as a failure.
        let measured = if worst >= 0.0 { worst.max(f64::MIN_POSITIVE) } else { worst };
        Ok((measured, "max successive increase of log_prob in E".into()))
    }));

    checks.push(bounded("hbar_scaling", HBAR_SCALING_TOL, || {
        let mut worst = 0.0_f64;
        for m in &models {
            for &e in &cfg.energies {
                let base = reflection_momentum_space(m, e, c, q)?.log_prob * c.hbar();
                for factor in [0.5, 2.0] {
                    let scaled = c.with_hbar_scaled(factor)?;
                    let other = reflection_momentum_space(m, e, &scaled, q)?.log_prob * scaled.hbar();
                    worst = worst.max(rel_diff(other, base));
                }
            }
        }
        Ok((worst, "log_prob*hbar across hbar x {1/2, 1, 2}".into()))
    }));

    checks.push(bounded("low_energy_universality", UNIVERSALITY_TOL, || {
        let mut worst = 0.0_f64;
        for m in &models[1..] {
            let e = 1e-3 * m.depth().expect("flat-tailed");
            let r = reflection_momentum_space(m, e, c, q)?;
            worst = worst.max((r.log_prob / low_energy_log_prob(m, e, c) - 1.0).abs());
        }
        Ok((worst, "E/V0 = 1e-3 vs -2piE/(hbar w_eff)".into()))
    }));

    checks.push(bounded("legendre_relation", LEGENDRE_TOL, || {
        let mut worst = 0.0_f64;
        for i in 1..=9 {
            let m = 0.1 * i as f64;
            let (k, e) = (elliptic_k(m)?, elliptic_e(m)?);
            let (kc, ec) = (elliptic_k(1.0 - m)?, elliptic_e(1.0 - m)?);
            worst = worst.max((e * kc + ec * k - k * kc - FRAC_PI_2).abs());
        }
        Ok((worst, "m = 0.1..0.9".into()))
    }));

    checks.push(bounded("numerov_unitarity", UNITARITY_TOL, || {
        let mut worst = 0.0_f64;
        for m in [PotentialModel::sech2(10.0, 2.0)?, PotentialModel::lorentzian(10.0, 2.0)?] {
            for e in [0.5, 1.0, 2.0] {
                let grid = ScatteringGrid::default_for(&m, e, c)?;
                worst = worst.max(numerov_scatter(&m, e, c, &grid)?.unitarity_defect);
            }
        }
        Ok((worst, "|R + T - 1|, V0=10, a=2".into()))
    }));

    let drift_limit = 100.0 * cfg.tdse_rel_tol;
    checks.push(bounded("tdse_norm_conservation", drift_limit, || {
        let eps = CouplingSpec::new(1.0)?;
        let mut worst = 0.0_f64;
        for profile in [CrossingProfile::linear(2.0 * c.hbar())?, CrossingProfile::tanh(5.0, 3.0)?] {
            let span = default_t_span(&profile, &eps, c);
            worst = worst.max(evolve_tdse(&profile, &eps, c, span, cfg.tdse_rel_tol)?.max_norm_drift);
        }
        Ok((worst, "max ||a|^2+|b|^2-1| along trajectory".into()))
    }));

    checks.push(bounded("lz_closed_form", LZ_CLOSED_FORM_TOL, || {
        let mut worst = 0.0_f64;
        for t_scale in [0.5, 1.0, 2.0, 3.0] {
            for e in [0.3, 1.0] {
                let eps = CouplingSpec::new(e)?;
                let lin = CrossingProfile::linear(t_scale)?;
                let a = adiabatic_reflection(&lin, &eps, c, q)?;
                let cf = lz_closed_form(t_scale, &eps, c)?;
                worst = worst.max(rel_diff(a.log_prob, cf.log_prob));
            }
        }
        Ok((worst, "adiabatic(linear) vs exp(-pi T eps^2/hbar)".into()))
    }));

    checks.push(bounded("exact_ho_ratio", EXACT_HO_RATIO_TOL, || {
        let ho = models[0];
        let mut worst = 0.0_f64;
        for &e in &cfg.energies {
            let exact = exact_ho_reflection(e, c, 1.0)?;
            let wkb = reflection_closed_form(&ho, e, c)?;
            let x = 2.0 * PI * e / (c.hbar() * (1.0 / c.mass()).sqrt());
            let expected = 1.0 / (1.0 + (-x).exp());
            worst = worst.max(rel_diff((exact.log_prob - wkb.log_prob).exp(), expected));
        }
        Ok((worst, "exact/WKB vs 1/(1+exp(-2piE/hbar w))".into()))
    }));

    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_validation(&ValidationConfig::default());
        for c in &report.checks {
            assert!(c.passed, "{c}");
        }
        assert_eq!(report.checks.len(), 13);
    }

    #[test]
    fn halved_hbar_still_passes() {
        let cfg = ValidationConfig {
            consts: PhysicalConstants::new(0.5, 1.0).unwrap(),
            ..Default::default()
        };
        let report = run_validation(&cfg);
        assert!(report.all_passed(), "{:#?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }

    #[test]
    fn coarse_quadrature_fails_convergence() {
        let cfg = ValidationConfig {
            quad: QuadratureSpec::new(8, 2, 1e-10).unwrap(),
            ..Default::default()
        };
        let report = run_validation(&cfg);
        assert!(!report.all_passed());
        let conv = report.checks.iter().find(|c| c.name == "quadrature_convergence").unwrap();
        assert!(!conv.passed);
    }
}
