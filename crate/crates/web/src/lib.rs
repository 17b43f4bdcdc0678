//! WebAssembly bindings for the browser demo.
//!
//! Each export takes plain numbers and returns a JSON string the page plots.
//! The `*_json` functions hold the logic so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use semiref::landau_zener::{default_t_span, evolve_tdse_observed, DEFAULT_TDSE_REL_TOL};
use semiref::reflection::TURNING_POINT_TOL;
use semiref::scattering::ScatteringGrid;
use semiref::{
    adiabatic_reflection, exact_ho_reflection, instantaneous_eigensystem, lz_closed_form, numerov_reflection,
    reflection_closed_form, reflection_contour_ll, reflection_momentum_space, CouplingSpec, CrossingProfile,
    PhysicalConstants, PotentialKind, PotentialModel, ProfileKind, QuadratureSpec,
};

type Out = Result<String, String>;

fn model(kind: &str, alpha: f64, v0: f64, a: f64) -> Result<PotentialModel, String> {
    let kind: PotentialKind = kind.parse()?;
    match kind {
        PotentialKind::InverseHo => PotentialModel::inverse_ho(alpha),
        PotentialKind::Sech2 => PotentialModel::sech2(v0, a),
        PotentialKind::Lorentzian => PotentialModel::lorentzian(v0, a),
    }
    .map_err(|e| e.to_string())
}

fn consts(hbar: f64, mass: f64) -> Result<PhysicalConstants, String> {
    PhysicalConstants::new(hbar, mass).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Out {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

#[derive(Serialize)]
struct Curve {
    energy: Vec<f64>,
    momentum: Vec<Option<f64>>,
    contour: Vec<Option<f64>>,
    closed: Vec<Option<f64>>,
    /// Numerov for flat-tailed barriers, the exact formula for the parabola.
    reference: Vec<Option<f64>>,
    reference_name: &'static str,
}

/// `ln|R|²` against energy for each route. Failed points are `null`.
#[allow(clippy::too_many_arguments)]
pub fn reflection_curve_json(
    kind: &str,
    alpha: f64,
    v0: f64,
    a: f64,
    hbar: f64,
    mass: f64,
    emin: f64,
    emax: f64,
    n: usize,
) -> Out {
    let m = model(kind, alpha, v0, a)?;
    let c = consts(hbar, mass)?;
    if !(emin > 0.0 && emax > emin && (2..=400).contains(&n)) {
        return Err("need 0 < emin < emax and 2 <= n <= 400".into());
    }
    let q = QuadratureSpec::default();
    let is_ho = m.kind() == PotentialKind::InverseHo;
    let energy: Vec<f64> = linspace(emin, emax, n).collect();
    let ok = |r: semiref::Result<semiref::ReflectionResult>| r.ok().map(|r| r.log_prob);
    let curve = Curve {
        momentum: energy.iter().map(|&e| ok(reflection_momentum_space(&m, e, &c, &q))).collect(),
        contour: energy.iter().map(|&e| ok(reflection_contour_ll(&m, e, &c, &q))).collect(),
        closed: energy.iter().map(|&e| ok(reflection_closed_form(&m, e, &c))).collect(),
        reference: energy
            .iter()
            .map(|&e| {
                if is_ho {
                    ok(exact_ho_reflection(e, &c, alpha))
                } else {
                    ok(ScatteringGrid::default_for(&m, e, &c).and_then(|g| numerov_reflection(&m, e, &c, &g)))
                }
            })
            .collect(),
        reference_name: if is_ho { "exact" } else { "numerov" },
        energy,
    };
    to_json(&curve)
}

#[derive(Serialize)]
struct Profile {
    x: Vec<f64>,
    v: Vec<f64>,
    /// `V(iy)` on `[0, y₀]`, where it rises from 0 to `E`.
    y: Vec<f64>,
    v_imag: Vec<f64>,
    y0: f64,
    pole: Option<f64>,
    /// `Im V⁻¹(E − p²/2m)` across the forbidden zone `|p| < p₀`.
    p: Vec<f64>,
    im_v_inverse: Vec<f64>,
    p0: f64,
}

pub fn potential_profile_json(kind: &str, alpha: f64, v0: f64, a: f64, energy: f64, hbar: f64, mass: f64) -> Out {
    let m = model(kind, alpha, v0, a)?;
    let c = consts(hbar, mass)?;
    let err = |e: semiref::Error| e.to_string();
    let y0 = m.imaginary_turning_point(energy, &c, TURNING_POINT_TOL).map_err(err)?;
    let p0 = m.p_limits(energy, &c).map_err(err)?.p0;
    let half_width = match m.kind() {
        PotentialKind::InverseHo => 3.0 * y0.max(1.0),
        _ => 4.0 * a,
    };
    let x: Vec<f64> = linspace(-half_width, half_width, 241).collect();
    let y: Vec<f64> = linspace(0.0, y0, 121).collect();
    // Interior points only; Im V⁻¹ vanishes at the turning momenta.
    let p: Vec<f64> = linspace(-p0, p0, 203).skip(1).take(201).collect();
    let im = p
        .iter()
        .map(|&p| m.im_v_inverse(energy - p * p / (2.0 * c.mass())))
        .collect::<semiref::Result<Vec<_>>>()
        .map_err(err)?;
    let v_imag = y
        .iter()
        .map(|&y| m.v_on_imaginary_axis(y))
        .collect::<semiref::Result<Vec<_>>>()
        .map_err(err)?;
    to_json(&Profile {
        v: x.iter().map(|&x| m.v(x)).collect(),
        x,
        v_imag,
        y,
        y0,
        pole: m.imaginary_axis_pole(),
        im_v_inverse: im,
        p,
        p0,
    })
}

#[derive(Serialize)]
struct Trajectory {
    t: Vec<f64>,
    f: Vec<f64>,
    e_plus: Vec<f64>,
    /// Populations of the instantaneous upper and lower adiabatic states.
    upper: Vec<f64>,
    lower: Vec<f64>,
    tdse_log: f64,
    adiabatic_log: Option<f64>,
    closed_log: Option<f64>,
}

const MAX_SAMPLES: usize = 800;

pub fn lz_trajectory_json(profile: &str, scale: f64, e_sat: f64, eps: f64, hbar: f64) -> Out {
    let err = |e: semiref::Error| e.to_string();
    let kind: ProfileKind = profile.parse()?;
    let prof = match kind {
        ProfileKind::Linear => CrossingProfile::linear(scale),
        ProfileKind::Tanh => CrossingProfile::tanh(scale, e_sat),
    }
    .map_err(err)?;
    let coupling = CouplingSpec::new(eps).map_err(err)?;
    let c = consts(hbar, 1.0)?;
    let span = default_t_span(&prof, &coupling, &c);

    let mut states = Vec::new();
    let out = evolve_tdse_observed(&prof, &coupling, &c, span, DEFAULT_TDSE_REL_TOL, |s| states.push(*s)).map_err(err)?;

    // Thin to roughly evenly spaced times; keep the last state.
    let dt = (span.1 - span.0) / MAX_SAMPLES as f64;
    let mut traj = Trajectory {
        t: Vec::new(),
        f: Vec::new(),
        e_plus: Vec::new(),
        upper: Vec::new(),
        lower: Vec::new(),
        tdse_log: out.refl_prob.ln(),
        adiabatic_log: adiabatic_reflection(&prof, &coupling, &c, &QuadratureSpec::default())
            .ok()
            .map(|r| r.log_prob),
        closed_log: match kind {
            ProfileKind::Linear => lz_closed_form(scale, &coupling, &c).ok().map(|r| r.log_prob),
            ProfileKind::Tanh => None,
        },
    };
    let mut next = f64::NEG_INFINITY;
    let last = states.len().saturating_sub(1);
    for (i, s) in states.iter().enumerate() {
        if s.t < next && i != last {
            continue;
        }
        next = s.t + dt;
        let eig = instantaneous_eigensystem(&prof, &coupling, s.t);
        traj.t.push(s.t);
        traj.f.push(prof.f(s.t));
        traj.e_plus.push(eig.e_plus);
        traj.upper.push(s.population(eig.phi_plus));
        traj.lower.push(s.population(eig.phi_minus));
    }
    to_json(&traj)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn reflection_curve(
    kind: &str,
    alpha: f64,
    v0: f64,
    a: f64,
    hbar: f64,
    mass: f64,
    emin: f64,
    emax: f64,
    n: usize,
) -> Result<String, JsValue> {
    reflection_curve_json(kind, alpha, v0, a, hbar, mass, emin, emax, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn potential_profile(
    kind: &str,
    alpha: f64,
    v0: f64,
    a: f64,
    energy: f64,
    hbar: f64,
    mass: f64,
) -> Result<String, JsValue> {
    potential_profile_json(kind, alpha, v0, a, energy, hbar, mass).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lz_trajectory(profile: &str, scale: f64, e_sat: f64, eps: f64, hbar: f64) -> Result<String, JsValue> {
    lz_trajectory_json(profile, scale, e_sat, eps, hbar).map_err(|e| JsValue::from_str(&e))
}
