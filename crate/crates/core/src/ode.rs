//! Adaptive Dormand–Prince 5(4) for small fixed-size real systems.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (same as the last row of `A`, FSAL).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
/// Difference between fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `y' = f(t, y)` from `t0` to `t1`, calling `observe` after each
/// accepted step (and once at `t0`).
pub fn integrate<const N: usize, F, O>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    tol: Tolerances,
    mut observe: O,
) -> Result<([f64; N], Stats)>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    const MAX_STEPS: usize = 50_000_000;
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y);
    let mut h = initial_step(span, &y, &k[0], tol);
    let mut stats = Stats::default();
    observe(t, &y);

    while (t1 - t) * dir > 0.0 {
        if stats.accepted + stats.rejected > MAX_STEPS {
            return Err(Error::NotConverged {
                what: "ode integration",
                best: t,
                err: h,
            });
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        for s in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * k[j][i];
                }
                *yi += dir * h * acc;
            }
            k[s] = f(t + dir * h * C[s], &ys);
        }
        let mut y_new = y;
        let mut err_norm = 0.0_f64;
        for i in 0..N {
            let mut inc = 0.0;
            let mut err = 0.0;
            for s in 0..7 {
                inc += B5[s] * k[s][i];
                err += E[s] * k[s][i];
            }
            y_new[i] = y[i] + dir * h * inc;
            let sc = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err_norm = err_norm.max((h * err / sc).abs());
        }

        if err_norm <= 1.0 {
            t = if last { t1 } else { t + dir * h };
            y = y_new;
            k[0] = k[6];
            stats.accepted += 1;
            observe(t, &y);
            let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= (0.9 * err_norm.powf(-0.2)).clamp(0.1, 1.0);
        }
        if !(h > 0.0) || !h.is_finite() || h < 1e-14 * span {
            return Err(Error::NotConverged {
                what: "ode step size",
                best: t,
                err: h,
            });
        }
    }
    Ok((y, stats))
}

fn initial_step<const N: usize>(span: f64, y: &[f64; N], dy: &[f64; N], tol: Tolerances) -> f64 {
    let mut d0 = 0.0_f64;
    let mut d1 = 0.0_f64;
    for i in 0..N {
        let sc = tol.abs + tol.rel * y[i].abs();
        d0 = d0.max((y[i] / sc).abs());
        d1 = d1.max((dy[i] / sc).abs());
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let tol = Tolerances { rel: 1e-10, abs: 1e-12 };
        let (y, stats) = integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, 3.0, [1.0], tol, |_, _| {}).unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-10);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let tol = Tolerances { rel: 1e-11, abs: 1e-13 };
        let (y, _) = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, -10.0, [0.0, 1.0], tol, |_, _| {}).unwrap();
        assert!((y[0] - (-10.0f64).sin()).abs() < 1e-8);
        assert!((y[1] - (-10.0f64).cos()).abs() < 1e-8);
    }

    #[test]
    fn observer_sees_endpoints() {
        let tol = Tolerances { rel: 1e-8, abs: 1e-10 };
        let mut times = Vec::new();
        integrate(|t, _: &[f64; 1]| [t], 1.0, 2.0, [0.0], tol, |t, _| times.push(t)).unwrap();
        assert_eq!(times.first(), Some(&1.0));
        assert_eq!(times.last(), Some(&2.0));
    }
}
