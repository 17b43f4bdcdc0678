//! Gauss–Legendre quadrature with level refinement, and the forbidden-zone
//! kernel shared by every semiclassical reflection route.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node schedule: level `k` uses `nodes · 2^k` points, `k = 0..refinement_levels`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    nodes: usize,
    refinement_levels: usize,
    rel_tol: f64,
}

impl QuadratureSpec {
    pub const MIN_NODES: usize = 8;
    pub const MIN_LEVELS: usize = 2;

    pub fn new(nodes: usize, refinement_levels: usize, rel_tol: f64) -> Result<Self> {
        if nodes < Self::MIN_NODES {
            return Err(Error::InvalidParameter {
                name: "nodes",
                value: nodes as f64,
                reason: "at least 8 nodes required",
            });
        }
        if refinement_levels < Self::MIN_LEVELS {
            return Err(Error::InvalidParameter {
                name: "refinement_levels",
                value: refinement_levels as f64,
                reason: "at least 2 levels required to estimate the error",
            });
        }
        if nodes.checked_shl(refinement_levels as u32 - 1).is_none_or(|n| n > 1 << 16) {
            return Err(Error::InvalidParameter {
                name: "refinement_levels",
                value: refinement_levels as f64,
                reason: "finest level would exceed 65536 nodes",
            });
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: rel_tol,
                reason: "must be finite and > 0",
            });
        }
        Ok(Self {
            nodes,
            refinement_levels,
            rel_tol,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn refinement_levels(&self) -> usize {
        self.refinement_levels
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn level_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.refinement_levels).map(move |k| self.nodes << k)
    }
}

impl Default for QuadratureSpec {
    /// 32/64/128 nodes, relative tolerance 1e-10.
    fn default() -> Self {
        Self {
            nodes: 32,
            refinement_levels: 3,
            rel_tol: 1e-10,
        }
    }
}

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes an `n`-point rule by Newton iteration on `Pₙ`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th largest root.
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared, lazily built rule for `n` nodes.
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integral value with the difference between the two finest levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
    /// `|Iₖ − Iₖ₋₁|` for every level `k ≥ 1` that was evaluated.
    pub level_diffs: Vec<f64>,
}

/// Refines Gauss–Legendre over `[lo, hi]` until two successive levels agree to
/// `spec.rel_tol`. Exhausting the schedule yields [`Error::NotConverged`] with
/// the finest value as `best`.
pub fn integrate_refined<F: Fn(f64) -> f64>(
    what: &'static str,
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let mut prev: Option<f64> = None;
    let mut level_diffs = Vec::with_capacity(spec.refinement_levels());
    let mut last_diff = f64::INFINITY;
    let mut value = 0.0;
    for n in spec.level_nodes() {
        value = GaussLegendre::cached(n).integrate(&f, lo, hi);
        if !value.is_finite() {
            return Err(Error::NotConverged {
                what,
                best: value,
                err: f64::INFINITY,
            });
        }
        if let Some(p) = prev {
            last_diff = (value - p).abs();
            level_diffs.push(last_diff);
            if last_diff <= spec.rel_tol * value.abs() {
                return Ok(Estimate {
                    value,
                    err: last_diff,
                    level_diffs,
                });
            }
        }
        prev = Some(value);
    }
    Err(Error::NotConverged {
        what,
        best: value,
        err: last_diff,
    })
}

/// `∫_{−p₀}^{p₀} g(|p|) dp` for an even integrand that vanishes like a square
/// root at `±p₀`.
///
/// The substitution `p = p₀ sin θ` turns the square-root endpoint into an
/// analytic one, so Gauss–Legendre in `θ ∈ [0, π/2]` converges geometrically.
/// Both the coordinate-barrier reflection and the adiabatic transition
/// formula go through this kernel; `g` receives `|p|`.
pub fn forbidden_zone_integral<G: Fn(f64) -> f64>(
    what: &'static str,
    p0: f64,
    g: G,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if p0 == 0.0 {
        return Ok(Estimate {
            value: 0.0,
            err: 0.0,
            level_diffs: Vec::new(),
        });
    }
    let half = integrate_refined(
        what,
        |theta: f64| {
            let (s, c) = theta.sin_cos();
            g(p0 * s) * p0 * c
        },
        0.0,
        FRAC_PI_2,
        spec,
    );
    match half {
        Ok(mut est) => {
            est.value *= 2.0;
            est.err *= 2.0;
            est.level_diffs.iter_mut().for_each(|d| *d *= 2.0);
            Ok(est)
        }
        Err(Error::NotConverged { what, best, err }) => Err(Error::NotConverged {
            what,
            best: 2.0 * best,
            err: 2.0 * err,
        }),
        Err(e) => Err(e),
    }
}
