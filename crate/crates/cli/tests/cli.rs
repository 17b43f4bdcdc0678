use std::f64::consts::PI;
use std::process::{Command, Output};

fn semiref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiref"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

fn num(r: &csv::StringRecord, i: usize) -> f64 {
    r[i].parse().unwrap()
}

#[test]
fn reflect_header_is_stable() {
    let o = semiref(&["reflect", "--model", "sech2", "--n", "3", "--emin", "0.5", "--emax", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("energy,method,log_prob,prob,err_estimate"));
}

#[test]
fn lz_header_is_stable() {
    let o = semiref(&["lz", "--profile", "linear", "--T", "2", "--eps", "1", "--methods", "closed"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().next(),
        Some("scale,epsilon,method,log_prob,prob,err_estimate")
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "reflect", "--model", "lorentzian", "--emin", "0.1", "--emax", "5", "--n", "12", "--spacing", "log",
        "--methods", "all",
    ];
    let a = semiref(&args);
    let b = semiref(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let lz = ["lz", "--profile", "tanh", "--tau", "3,5", "--eps", "0.3", "--output", "json"];
    assert_eq!(semiref(&lz).stdout, semiref(&lz).stdout);
}

#[test]
fn inverse_ho_closed_and_momentum_agree() {
    let o = semiref(&[
        "reflect", "--model", "inverse_ho", "--emin", "0.1", "--emax", "2", "--n", "20", "--methods",
        "closed,momentum",
    ]);
    assert!(o.status.success());
    let recs = rows(&stdout(&o));
    assert_eq!(recs.len(), 40);
    for pair in recs.chunks(2) {
        assert_eq!(&pair[0][1], "closed");
        assert_eq!(&pair[1][1], "momentum");
        assert_eq!(num(&pair[0], 0), num(&pair[1], 0));
        assert!((num(&pair[0], 2) - num(&pair[1], 2)).abs() <= 1e-8);
    }
}

#[test]
fn single_point_sech2() {
    let o = semiref(&["reflect", "--model", "sech2", "--v0", "1", "--a", "1", "--emin", "1", "--n", "1", "--methods", "closed"]);
    assert!(o.status.success());
    let recs = rows(&stdout(&o));
    assert_eq!(recs.len(), 1);
    assert!((num(&recs[0], 2) + 3.6806).abs() < 1e-4);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["reflect", "--model", "sech2", "--methods", ""][..],
        &["reflect", "--model", "inverse_ho", "--methods", "numerov"],
        &["reflect", "--model", "sech2", "--methods", "exact"],
        &["reflect", "--model", "sech2", "--emin", "2", "--emax", "1"],
        &["reflect", "--model", "nope"],
        &["reflect"],
        &["reflect", "--model", "sech2", "--bogus"],
        &["lz", "--profile", "tanh", "--tau", "3", "--eps", "0.3", "--methods", "closed"],
        &["lz", "--profile", "linear", "--eps", "1"],
        &["validate", "--nodes", "8", "--levels", "1"],
        &["validate", "--hbar", "-1"],
    ] {
        let o = semiref(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn lz_linear_closed_form_column() {
    let o = semiref(&["lz", "--profile", "linear", "--T", "1,2,3", "--eps", "1", "--methods", "all"]);
    assert!(o.status.success());
    let recs = rows(&stdout(&o));
    assert_eq!(recs.len(), 9);
    for (i, n) in [1.0, 2.0, 3.0].iter().enumerate() {
        let group = &recs[3 * i..3 * i + 3];
        let names: Vec<_> = group.iter().map(|r| r[2].to_string()).collect();
        assert_eq!(names, ["adiabatic", "closed", "tdse"]);
        let closed = num(&group[1], 4);
        assert!((closed / (-PI * n).exp() - 1.0).abs() < 1e-12);
    }
    // TDSE vs adiabatic at T eps^2/hbar = 2
    let (adia, tdse) = (num(&recs[3], 3), num(&recs[5], 3));
    assert!((tdse / adia - 1.0).abs() < 0.05);
}

#[test]
fn tanh_without_avoided_crossing_fails_per_row() {
    let o = semiref(&["lz", "--profile", "tanh", "--tau", "5", "--e-sat", "0.2", "--eps", "0.1,0.3", "--methods", "adiabatic"]);
    assert_eq!(o.status.code(), Some(1));
    let recs = rows(&stdout(&o));
    assert_eq!(recs.len(), 2);
    assert!(num(&recs[0], 3).is_finite());
    assert_eq!(&recs[1][3], "NaN");
    assert!(String::from_utf8_lossy(&o.stderr).contains("eps=0.3"));
}

#[test]
fn validate_default_and_scaled_hbar_pass() {
    let o = semiref(&["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
    let o = semiref(&["validate", "--hbar", "0.5"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn coarse_quadrature_fails_validation() {
    let o = semiref(&["validate", "--nodes", "8", "--levels", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] quadrature_convergence"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "command = \"reflect\"\nmodel = \"sech2\"\nv0 = 10.0\na = 2.0\nemin = 0.5\nemax = 2.0\nn = 4\nmethods = [\"closed\", \"numerov\"]\n",
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let cfg_s = cfg.to_str().unwrap();
    let o = semiref(&["reflect", "--config", cfg_s, "--n", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), 4);
    assert_eq!(arr[0]["energy"], 0.5);
    assert_eq!(arr[3]["energy"], 2.0);
    assert_eq!(arr[1]["method"], "numerov");
    for key in ["energy", "method", "log_prob", "prob", "err_estimate"] {
        assert!(arr[0].get(key).is_some());
    }

    let o = semiref(&["lz", "--config", cfg_s, "--T", "1", "--eps", "1"]);
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(&cfg, "modle = \"sech2\"\n").unwrap();
    assert_eq!(semiref(&["reflect", "--config", cfg_s]).status.code(), Some(2));
}
