use serde_json::Value;

use semiref_web::{lz_trajectory_json, potential_profile_json, reflection_curve_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn curve_routes_agree() {
    let v = parse(&reflection_curve_json("sech2", 1.0, 10.0, 2.0, 1.0, 1.0, 0.5, 3.0, 6).unwrap());
    let (m, c, cl) = (floats(&v["momentum"]), floats(&v["contour"]), floats(&v["closed"]));
    assert_eq!(m.len(), 6);
    for i in 0..6 {
        assert!((m[i] - c[i]).abs() < 1e-8 * m[i].abs());
        assert!((m[i] - cl[i]).abs() < 1e-8 * m[i].abs());
    }
    assert_eq!(v["reference_name"], "numerov");
    assert!(floats(&v["reference"]).iter().all(|r| *r < 0.0));
}

#[test]
fn curve_uses_exact_formula_for_parabola() {
    let v = parse(&reflection_curve_json("inverse_ho", 1.0, 0.0, 0.0, 1.0, 1.0, 0.1, 2.0, 4).unwrap());
    assert_eq!(v["reference_name"], "exact");
    let r = floats(&v["reference"]);
    let cl = floats(&v["closed"]);
    assert!(r.iter().zip(&cl).all(|(r, c)| r < c));
}

#[test]
fn curve_rejects_bad_input() {
    assert!(reflection_curve_json("sech2", 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 5).is_err());
    assert!(reflection_curve_json("nope", 1.0, 1.0, 1.0, 1.0, 1.0, 0.1, 1.0, 5).is_err());
}

#[test]
fn profile_turning_point_reaches_energy() {
    let e = 1.5;
    let v = parse(&potential_profile_json("lorentzian", 1.0, 1.0, 1.0, e, 1.0, 1.0).unwrap());
    let vi = floats(&v["v_imag"]);
    assert!(vi[0].abs() < 1e-12);
    assert!((vi.last().unwrap() - e).abs() < 1e-8);
    assert!(v["y0"].as_f64().unwrap() < v["pole"].as_f64().unwrap());
    let im = floats(&v["im_v_inverse"]);
    assert!(im.iter().all(|x| *x > 0.0));
    assert_eq!(floats(&v["x"]).len(), floats(&v["v"]).len());
}

#[test]
fn trajectory_ends_near_landau_zener() {
    let v = parse(&lz_trajectory_json("linear", 2.0, 1.0, 1.0, 1.0).unwrap());
    let lower = floats(&v["lower"]);
    let upper = floats(&v["upper"]);
    assert!(lower.len() <= 802 && lower.len() > 100);
    assert!(upper[0] > 1.0 - 1e-9);
    let tdse = v["tdse_log"].as_f64().unwrap();
    let closed = v["closed_log"].as_f64().unwrap();
    assert!((tdse / closed - 1.0).abs() < 0.05);
    assert!((lower.last().unwrap().ln() - tdse).abs() < 1e-9);
}

#[test]
fn tanh_trajectory_without_avoided_crossing_still_runs() {
    let v = parse(&lz_trajectory_json("tanh", 5.0, 0.2, 0.3, 1.0).unwrap());
    assert!(v["adiabatic_log"].is_null());
    assert!(v["closed_log"].is_null());
}
