//! Complete elliptic integrals K(m) and E(m) by the arithmetic-geometric mean.
//!
//! The argument is the *parameter* `m = k²`, not the modulus `k`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_ITER: usize = 64;
const AGM_TOL: f64 = 1e-15;

/// Runs the AGM on `(1, √(1−m))` and returns `(agm, Σ 2ⁿ⁻¹ cₙ²)`.
fn agm_with_defect_sum(m: f64) -> (f64, f64) {
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    // c₀² = m enters with weight 2⁻¹.
    let mut sum = 0.5 * m;
    let mut weight = 0.5_f64;
    for _ in 0..MAX_ITER {
        let c = 0.5 * (a - b);
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        weight *= 2.0;
        sum += weight * c * c;
        a = a_next;
        b = b_next;
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
    }
    (0.5 * (a + b), sum)
}

/// `K(m) = ∫₀^{π/2} dθ / √(1 − m sin²θ)` for `0 ≤ m < 1`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain {
            what: "elliptic_k",
            value: m,
            reason: "parameter must satisfy 0 <= m < 1",
        });
    }
    let (agm, _) = agm_with_defect_sum(m);
    Ok(FRAC_PI_2 / agm)
}

/// `E(m) = ∫₀^{π/2} dθ √(1 − m sin²θ)` for `0 ≤ m ≤ 1`.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain {
            what: "elliptic_e",
            value: m,
            reason: "parameter must satisfy 0 <= m <= 1",
        });
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let (agm, sum) = agm_with_defect_sum(m);
    Ok(FRAC_PI_2 / agm * (1.0 - sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Adaptive Simpson on the defining integrals; shares nothing with the AGM.
    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn step(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                left + right + delta / 15.0
            } else {
                step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                    + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
            }
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        step(f, a, b, fa, fm, fb, whole, tol, 40)
    }

    fn k_by_quadrature(m: f64) -> f64 {
        adaptive_simpson(&|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14)
    }

    fn e_by_quadrature(m: f64) -> f64 {
        adaptive_simpson(&|t: f64| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14)
    }

    #[test]
    fn endpoint_values() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
    }

    #[test]
    fn frozen_half_parameter_values() {
        // Pinned by quadrature of the defining integrals.
        assert_relative_eq!(elliptic_k(0.5).unwrap(), 1.854_074_677_301_371_9, max_relative = 1e-14);
        assert_relative_eq!(elliptic_e(0.5).unwrap(), 1.350_643_881_047_675_5, max_relative = 1e-14);
        assert_relative_eq!(k_by_quadrature(0.5), 1.854_074_677_301_371_9, max_relative = 1e-12);
        assert_relative_eq!(e_by_quadrature(0.5), 1.350_643_881_047_675_5, max_relative = 1e-12);
    }

    #[test]
    fn logarithmic_divergence_near_one() {
        let m = 0.999_999;
        let k = elliptic_k(m).unwrap();
        assert!(k > 7.0);
        assert_relative_eq!(k, 0.5 * (16.0 / (1.0 - m)).ln(), max_relative = 1e-5);
        assert_relative_eq!(elliptic_e(m).unwrap(), 1.000_003_897_026_172, max_relative = 1e-12);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_e(1.0 + 1e-12).is_err());
        assert!(elliptic_e(f64::NAN).is_err());
    }

    #[test]
    fn agrees_with_quadrature_on_grid() {
        for i in 0..=19 {
            let m = 0.05 * i as f64;
            assert_relative_eq!(elliptic_k(m).unwrap(), k_by_quadrature(m), max_relative = 1e-10);
            assert_relative_eq!(elliptic_e(m).unwrap(), e_by_quadrature(m), max_relative = 1e-10);
        }
    }

    #[test]
    fn legendre_relation() {
        for i in 1..=9 {
            let m = 0.1 * i as f64;
            let (k, e) = (elliptic_k(m).unwrap(), elliptic_e(m).unwrap());
            let (kc, ec) = (elliptic_k(1.0 - m).unwrap(), elliptic_e(1.0 - m).unwrap());
            assert!((e * kc + ec * k - k * kc - FRAC_PI_2).abs() <= 1e-12, "m = {m}");
        }
    }

    #[test]
    fn e_below_k() {
        for i in 1..100 {
            let m = 0.01 * i as f64;
            assert!(elliptic_e(m).unwrap() < elliptic_k(m).unwrap());
        }
    }
}
