use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delta-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn box_node_state_unshifted() {
    let o = run(&["spectrum", "--model", "box-delta", "--L", "1", "--p", "0.5", "--lambda", "0.1", "--states", "3"]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    let e = col(&h, "e_exact");
    let e0 = col(&h, "e0");
    let shift = |i: usize| rows[i][e].parse::<f64>().unwrap() - rows[i][e0].parse::<f64>().unwrap();
    assert_eq!(shift(1), 0.0);
    assert!(shift(0) < 0.0 && shift(2) < 0.0);
}

#[test]
fn oscillator_parity() {
    let o = run(&["spectrum", "--model", "sho-delta", "--omega", "1", "--lambda", "0.1", "--states", "2"]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&stdout(&o));
    let e = col(&h, "e_exact");
    assert!(rows[0][e].parse::<f64>().unwrap() < 0.5);
    assert_eq!(rows[1][e].parse::<f64>().unwrap(), 1.5);
    assert_eq!(rows[1][col(&h, "parity")], "odd");
}

#[test]
fn well_top_state_e2_negative() {
    let o = run(&["spectrum", "--model", "well-delta", "--V0", "50", "--L", "1", "--lambda", "0.05"]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&stdout(&o));
    let top = rows.iter().rev().find(|r| r[col(&h, "parity")] == "even").unwrap();
    assert!(top[col(&h, "e2")].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn tables_reproduce_cells() {
    let t1 = stdout(&run(&["tables", "--table", "1"]));
    assert!(t1.contains("10,0.2273,-0.013"));
    let t2 = stdout(&run(&["tables", "--table", "2"]));
    assert!(t2.contains("2,3.07,3.20"));
    let t3 = stdout(&run(&["tables", "--table", "3"]));
    assert!(t3.lines().last().unwrap().starts_with("100000,3.14159265358979"));
}

#[test]
fn csv_round_trips_to_17_digits() {
    let o = run(&["spectrum", "--model", "box-delta", "--L", "1", "--p", "0.3", "--lambda", "0.7", "--states", "2"]);
    let (h, rows) = csv_rows(&stdout(&o));
    let cell = &rows[0][col(&h, "e_exact")];
    let v: f64 = cell.parse().unwrap();
    assert_eq!(format!("{v:.16e}"), *cell);
    let mantissa = cell.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn json_schema() {
    let o = run(&["spectrum", "--model", "hydrogen-delta", "--a", "1", "--mass", "1", "--lambda", "0.05", "--states", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "spectrum");
    assert_eq!(v["params"]["model"], "hydrogen-delta");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(v["rows"][0]["e_exact"].as_f64().unwrap() < -0.5);
    assert_eq!(v["provenance"]["units"]["mass"].as_f64(), Some(1.0));
    assert!(v["provenance"]["versions"].is_object());
}

#[test]
fn identical_runs_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let o = bin()
            .env("DELTA_SPECTRA_THREADS", threads)
            .args(["series", "--kind", "oscillator", "--n", "0", "--terms", "5000", "--every", "100", "--output"])
            .arg(path)
            .output()
            .unwrap();
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn rejected_flags_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--model", "box-delta", "--L", "1", "--p", "1.5", "--lambda", "0.1"],
        vec!["spectrum", "--model", "box-delta", "--L", "-1", "--p", "0.5"],
        vec!["spectrum", "--model", "well-delta", "--L", "1"],
        vec!["spectrum", "--model", "sho-delta", "--omega", "0"],
        vec!["spectrum", "--model", "nope"],
        vec!["tables", "--table", "4"],
        vec!["validate", "--only", "nothing"],
        vec!["series", "--kind", "odd-reciprocal", "--n", "2"],
    ];
    for c in cases {
        let o = bin().args(&c).arg("--output").arg(&out).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{c:?}");
        assert!(!out.exists(), "{c:?} left a file");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn validate_filter_and_fault() {
    let o = run(&["validate", "--only", "series"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv_rows(&stdout(&o));
    let g = col(&h, "group");
    assert!(rows.iter().all(|r| r[g] == "series" || r[g] == "finding"));

    let o = run(&["validate", "--only", "box", "--inject-fault", "lambda-sign"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("remainder order"));
}

#[test]
fn full_validate_passes() {
    let o = run(&["validate", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn pi_series_output() {
    let o = run(&["series", "--kind", "pi", "--terms", "10", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let last = rows[9]["pi_averaged"].as_f64().unwrap();
    assert!((last - std::f64::consts::PI).abs() < 1e-3);
}
