use std::process::{Command, Output};

use ewens_berry::cli::SWEEP_CSV_HEADER;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewens-berry"))
        .args(args)
        .env_remove("EWENS_BERRY_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn dist_csv_rows() {
    let o = bin(&["dist", "--n", "3", "--theta", "1", "--format", "csv"]);
    assert!(o.status.success());
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    let pmf: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!((pmf[0] - 1.0 / 3.0).abs() < 1e-15);
    assert!((pmf[1] - 0.5).abs() < 1e-15);
    assert_eq!(rows[2][4], "1/6");
}

#[test]
fn dist_json_envelope() {
    let o = bin(&[
        "--reproducible",
        "dist",
        "--n",
        "4",
        "--theta",
        "2",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["command"], "dist");
    assert!(v.get("timestamp").is_none());
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 4);
    // P(K = 4) = θ⁴/(θ)_4 = 16/120
    assert_eq!(v["results"]["rows"][3]["pmf_exact"], "2/15");

    let o = bin(&["dist", "--n", "4", "--theta", "2", "--format", "json"]);
    assert!(json(&o).get("timestamp").is_some());
}

#[test]
fn dist_rejects_empty_population() {
    let o = bin(&["dist", "--n", "0", "--theta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bounds_reports_constants_and_nulls() {
    let o = bin(&["--reproducible", "bounds", "--n", "1000000", "--theta", "1"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["results"]["C"], 0.5591);
    assert!(v["results"]["upper"].as_f64().unwrap() > 0.0);
    assert!(v["results"]["kolmo_x"].as_f64().unwrap() <= v["results"]["upper"].as_f64().unwrap());

    // The lower variance envelope is negative for a tiny population: nulls with reasons, still exit 0.
    let o = bin(&["--reproducible", "bounds", "--n", "2", "--theta", "1"]);
    assert!(o.status.success());
    let v = json(&o);
    assert!(v["results"]["upper"].is_null());
    assert!(v["results"]["upper_reason"]
        .as_str()
        .unwrap()
        .contains("variance-positive"));
    assert!(v["results"]["gamma1"].is_null());
}

#[test]
fn bounds_rejects_nonpositive_d() {
    let o = bin(&["bounds", "--n", "30", "--theta", "1", "--D", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_presets_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("presets.conf");
    std::fs::write(&path, "C = 0.4748\nD = 2\n").unwrap();
    let cfg = path.to_str().unwrap();

    let v = json(&bin(&[
        "--reproducible",
        "--config",
        cfg,
        "bounds",
        "--n",
        "100",
        "--theta",
        "1",
    ]));
    assert_eq!(v["results"]["C"], 0.4748);
    assert_eq!(v["results"]["D"], 2.0);
    let v = json(&bin(&[
        "--reproducible",
        "--config",
        cfg,
        "bounds",
        "--n",
        "100",
        "--theta",
        "1",
        "--C",
        "0.5591",
    ]));
    assert_eq!(v["results"]["C"], 0.5591);

    std::fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(bin(&["--config", cfg, "cstar"]).status.code(), Some(2));
}

#[test]
fn cstar_default_and_bad_tolerance() {
    let o = bin(&["cstar"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("cstar 2.1625815871\n"));
    assert_eq!(
        bin(&["cstar", "--tolerance", "1e-20"]).status.code(),
        Some(2)
    );
}

#[test]
fn sweep_csv_schema_and_errors() {
    let o = bin(&[
        "sweep",
        "--coupling",
        "ratio",
        "--c",
        "1.0",
        "--n-values",
        "64,128,256",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,theta,log_n,kolmo_x,kolmo_y,kolmo_z,upper,lower_i,lower_ii,rate_normalizer,scaled_error,log_scaled_error,status"
    );
    assert_eq!(SWEEP_CSV_HEADER.split(',').count(), 13);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows
        .iter()
        .all(|r| r.ends_with(",ok") && r.split(',').count() == 13));

    let o = bin(&[
        "sweep",
        "--coupling",
        "power",
        "--a",
        "1",
        "--p",
        "2.5",
        "--n-values",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = bin(&[
        "sweep",
        "--coupling",
        "ratio",
        "--c",
        "1.0",
        "--n-values",
        "",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&[
        "sweep",
        "--coupling",
        "ratio",
        "--c",
        "1.0",
        "--n-values",
        "64,32",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str, jobs: &str| {
        let path = dir.path().join(name);
        let o = bin(&[
            "--reproducible",
            "sweep",
            "--coupling",
            "power",
            "--a",
            "1",
            "--p",
            "0.5",
            "--n-min",
            "16",
            "--n-max",
            "4096",
            "--points",
            "5",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let a = out("a.csv", "1");
    let b = out("b.csv", "4");
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 6);
}

#[test]
fn moments_json() {
    let v = json(&bin(&[
        "--reproducible",
        "moments",
        "--n",
        "50",
        "--theta",
        "3",
    ]));
    assert_eq!(v["command"], "moments");
    let env = &v["results"]["envelopes"]["var"];
    let (lo, val, hi) = (
        env["lower"].as_f64().unwrap(),
        env["value"].as_f64().unwrap(),
        env["upper"].as_f64().unwrap(),
    );
    assert!(lo <= val && val <= hi);
}
