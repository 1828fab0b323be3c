use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BELL: &str = r#"{"matrix": [
  [[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
  [[0, 0],   [0, 0], [0, 0], [0, 0]],
  [[0, 0],   [0, 0], [0, 0], [0, 0]],
  [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]
]}"#;

const SINGLET: &str = r#"{"matrix": [
  [[0, 0], [0, 0],    [0, 0],    [0, 0]],
  [[0, 0], [0.5, 0],  [-0.5, 0], [0, 0]],
  [[0, 0], [-0.5, 0], [0.5, 0],  [0, 0]],
  [[0, 0], [0, 0],    [0, 0],    [0, 0]]
]}"#;

fn ptm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptmoments"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

#[test]
fn measure_bell_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bell.json", BELL);
    let v = stdout_json(&ptm(&["measure", "--in", &path]));
    let get = |k: &str| v[k].as_f64().unwrap();
    assert!((get("N_spectral") - 1.0).abs() < 1e-12);
    assert!((get("N_from_moments") - 1.0).abs() < 1e-12);
    assert!((get("w") - 1.0).abs() < 1e-12);
    assert!((get("C") - 1.0).abs() < 1e-12);
    assert!((get("W") + 1.0 / 16.0).abs() < 1e-14);
    assert_eq!(v["method"], "QuarticExact");
    for key in ["lower_bound", "upper_bound"] {
        assert!((get(key) - 1.0).abs() < 1e-9);
    }
    assert_eq!(v["moments"]["pi2"].as_f64().unwrap(), 1.0);
}

#[test]
fn invariants_of_singlet() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "singlet.json", SINGLET);
    let v = stdout_json(&ptm(&["invariants", "--in", &path]));
    assert!((v["invariants"]["i1"].as_f64().unwrap() + 1.0).abs() < 1e-14);
    assert!((v["derived"]["x1"].as_f64().unwrap() - 3.0).abs() < 1e-14);
}

#[test]
fn counterexamples_pass() {
    let out = ptm(&["counterexample", "convexity"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("PASS"), "{last}");
    assert!(last.contains("1/64") && last.contains("1/32"));

    let out = ptm(&["counterexample", "locc"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success());
    assert!(text.lines().last().unwrap().starts_with("PASS"));
    let json_part = &text[..text.rfind("PASS").unwrap()];
    let v: Value = serde_json::from_str(json_part).unwrap();
    assert!((v["w_before"].as_f64().unwrap() - 0.11719).abs() < 1e-4);
}

#[test]
fn noiseless_noise_study() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scatter.csv");
    let out = ptm(&[
        "noise-study",
        "--quantity",
        "negativity",
        "--n",
        "100",
        "--rel-noise",
        "0",
        "--seed",
        "7",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# quantity=negativity noise=uniform"));
    let (header, rows) = read_csv(&text);
    assert_eq!(header, ["n_theory", "n_experiment", "w_theory", "w_experiment"]);
    assert_eq!(rows.len(), 100);
    for row in rows {
        assert!((row[0] - row[1]).abs() < 1e-8);
        assert_eq!(row[2], row[3]);
    }
}

#[test]
fn csv_values_round_trip_exactly() {
    let out = ptm(&[
        "noise-study",
        "--quantity",
        "witness",
        "--n",
        "20",
        "--rel-noise",
        "1e-2",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data_line = text.lines().nth(2).unwrap();
    for field in data_line.split(',').filter(|f| *f != "NaN") {
        let x: f64 = field.parse().unwrap();
        assert_eq!(format!("{x:.16e}"), field);
    }
}

#[test]
fn random_state_round_trips_through_measure() {
    let dir = tempfile::tempdir().unwrap();
    for measure in ["hs", "bures", "mixed-rank"] {
        let path = dir.path().join(format!("{measure}.json"));
        let path = path.to_str().unwrap();
        let out = ptm(&["random", "--seed", "5", "--measure", measure, "--out", path]);
        assert!(out.status.success());
        let v = stdout_json(&ptm(&["measure", "--in", path]));
        let n = v["N_spectral"].as_f64().unwrap();
        assert!((n - v["N_from_moments"].as_f64().unwrap()).abs() < 1e-8);
    }
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "noise-study",
        "--quantity",
        "negativity",
        "--n",
        "50",
        "--rel-noise",
        "1e-3",
        "--seed",
        "11",
    ];
    assert_eq!(ptm(&args).stdout, ptm(&args).stdout);
    assert_eq!(
        ptm(&["random", "--seed", "2"]).stdout,
        ptm(&["random", "--seed", "2"]).stdout
    );
}

#[test]
fn xstate_case_report() {
    let v = stdout_json(&ptm(&["xstate", "--case", "8", "--params", "0.1"]));
    assert!((v["prediction"]["N"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert!(v["report"]["max_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["state"]["matrix"].as_array().unwrap().len(), 4);

    let v = stdout_json(&ptm(&["xstate", "--case", "6", "--params", "0.3,0.1"]));
    assert_eq!(v["prediction"]["negativity_source"], "Spectral");
}

#[test]
fn xstate_sweep_csv() {
    let out = ptm(&["xstate", "--sweep", "4", "--n", "50"]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(
        header,
        ["case", "param1", "param2", "N", "C", "w", "lower_bound", "upper_bound"]
    );
    assert_eq!(rows.len(), 50);
    for row in rows {
        assert!(row[6] - 1e-10 <= row[3] && row[3] <= row[7] + 1e-10);
    }
}

#[test]
fn exit_codes_and_diagnostics() {
    // usage errors
    assert_eq!(ptm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ptm(&["measure"]).status.code(), Some(2));
    assert_eq!(ptm(&["noise-study", "--quantity", "negativity"]).status.code(), Some(2));
    assert_eq!(ptm(&["xstate", "--case", "3", "--sweep", "3"]).status.code(), Some(2));

    // validation errors
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"matrix": [[[1, 0]]]}"#);
    let out = ptm(&["measure", "--in", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("matrix"), "{err}");
    assert!(out.stdout.is_empty());

    // Hermitian, trace 0.9
    let trace = write(dir.path(), "trace.json", &BELL.replacen("[[0.5, 0]", "[[0.4, 0]", 1));
    let out = ptm(&["measure", "--in", &trace]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("trace is not one"));

    assert_eq!(
        ptm(&["xstate", "--case", "8", "--params", "0.2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ptm(&["xstate", "--case", "4", "--params", "0.2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ptm(&["noise-study", "--quantity", "witness", "--rel-noise", "-1", "--n", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ptm(&["measure", "--in", "/nonexistent/state.json"]).status.code(),
        Some(1)
    );
}
