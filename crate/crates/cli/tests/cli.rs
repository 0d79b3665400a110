use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_dipole-phase");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn value(v: &Value, name: &str) -> f64 {
    v["results"][name]["value"]
        .as_f64()
        .unwrap_or_else(|| panic!("missing {name}"))
}

#[test]
fn phase_on_the_reference_path() {
    let out = run(&[
        "phase", "--b0", "100", "--y0", "0.01", "--a", "1", "--z-i", "-20", "--z-f", "20",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    for key in ["command", "inputs", "results", "errors", "meta"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for (_, r) in v["results"].as_object().unwrap() {
        for field in ["value", "error_estimate", "unit", "method"] {
            assert!(r.get(field).is_some());
        }
    }
    let limit = value(&v, "phi_g_sheet_limit");
    assert!((limit - 0.1205).abs() / 0.1205 < 5e-3);
    // a +-20a path sees only arctan(20)/(pi/2) of the asymptotic phase
    let finite = limit * 2.0 * 20f64.atan() / PI;
    assert!((value(&v, "phi_g") - finite).abs() < 1e-5);
    assert!((value(&v, "phi_g_path") - finite).abs() < 1e-5);
    assert_eq!(v["meta"]["constant_set"], "CODATA-2018/gaussian-cgs/10sd");
}

#[test]
fn interfere_sweep_completes_a_fringe() {
    let out = run(&[
        "interfere",
        "--sweep-min",
        "0",
        "--sweep-max",
        "26",
        "--sweep-points",
        "101",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("sweep_value,phi_g,p_200,p_210,error_estimate")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    let peak = rows.iter().max_by(|a, b| a[3].total_cmp(&b[3])).unwrap();
    assert!((peak[0] - 13.03).abs() < 0.26, "peak at {}", peak[0]);
    assert!(rows[0][3] == 0.0 && rows[100][3] < 1e-3);
    for r in &rows {
        assert!((r[3] - r[1].sin().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn momentum_at_zero_is_a_quarter_of_the_scale() {
    let out = run(&[
        "momentum",
        "--sweep-min",
        "-1",
        "--sweep-max",
        "1",
        "--sweep-points",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pi_z = v["results"]["pi_z"]["value"][1].as_f64().unwrap();
    let expect = 1.0 * 4.803204713e-10 / (4.0 * 2.997924580e10);
    assert!((pi_z - expect).abs() / expect < 1e-5);
}

#[test]
fn output_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dual.json");
    let out = run(&["dual", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    assert!((value(&v, "phi_g_dual_per_volt").abs() - 5.1e-10).abs() / 5.1e-10 < 0.02);
}

#[test]
fn config_file_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "# scenario\na = 1\nz_f = twenty\n").unwrap();
    let out = run(&["phase", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.conf:3:"));
    let out = run(&["phase", "--z-i", "5", "--z-f", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_convergence_writes_partial_results() {
    let out = run(&["phase", "--method", "endpoint", "--max-evals", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["errors"][0]["kind"], "non_convergence");
    assert!(v["errors"][0]["partial"]["value"].is_f64());
}

#[test]
fn gauge_compare_and_hmw() {
    let out = run(&["gauge-compare", "--z-f", "40", "--lambda", "0.001"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let diff = value(&v, "gauge_difference");
    assert!((diff - value(&v, "gauge_difference_predicted")).abs() <= 1e-9 * diff.abs());
    assert_eq!(value(&v, "phi_zero_gauge"), 0.0);
    let out = run(&["hmw", "--thin-sheet", "false"]);
    let v = json(&out);
    assert!((value(&v, "phi_loop") - value(&v, "phi_enclosed_sheet")).abs() < 1e-9);
    assert_eq!(run(&["hmw"]).status.code(), Some(1));
}

#[test]
fn thread_cap_is_honoured() {
    let out = Command::new(BIN)
        .arg("dual")
        .env("DIPOLE_PHASE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["meta"]["threads"], 2);
    let out = Command::new(BIN)
        .arg("dual")
        .env("DIPOLE_PHASE_THREADS", "-3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn starved_verify_reports_failures() {
    let out = run(&["verify", "--max-evals", "200"]);
    assert_eq!(out.status.code(), Some(3));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("FAIL") && table.contains("PASS"));
}
