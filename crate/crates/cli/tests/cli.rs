use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squeeze-lab")).args(args).output().expect("spawn squeeze-lab")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn pinch_thullen_example() {
    let v = json(&run(&["pinch", "--domain", "thullen:k=0.5", "--point", "1,0,0,0", "--samples", "20000"]));
    assert_eq!(v["command"], "pinch");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let p = v["rows"][0]["pinching"].as_f64().unwrap();
    assert!((p - 0.5).abs() < 1e-2, "{p}");
    assert_eq!(v["rows"][0]["provenance"], "Heuristic");
}

#[test]
fn envelope_example() {
    let v = json(&run(&["envelope", "--relation", "KB", "--s", "1", "--n", "1"]));
    assert_eq!(v["rows"][0]["high"].as_f64().unwrap(), 8.0 * std::f64::consts::PI);
    assert_eq!(v["rows"][0]["provenance"], "Exact");
}

#[test]
fn geodesic_csv_has_both_columns() {
    let out = run(&["geodesic", "--r-grid", "0.55:0.99:45", "--rho", "0.5", "--oracle", "--oracle-grid", "10000", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap_or_else(|| panic!("missing {name}"));
    let (c, o) = (col("closed_form"), col("oracle"));
    let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 45);
    for r in rows {
        let a: f64 = r[c].parse().unwrap();
        let b: f64 = r[o].parse().unwrap();
        assert!((a - b).abs() < 1e-3);
        assert_eq!(&r[col("seed")], "42");
        assert_eq!(&r[col("provenance")], "Exact");
    }
}

#[test]
fn geodesic_outside_region_reports_the_oracle() {
    let v = json(&run(&["geodesic", "--r", "0.3", "--rho", "0.5", "--oracle-grid", "10000"]));
    let row = &v["rows"][0];
    assert_eq!(row["value_source"], "oracle");
    assert_eq!(row["provenance"], "Heuristic");
    assert!(row["closed_form"].is_null() && row["oracle"].as_f64().unwrap() > 0.0);
}

#[test]
fn other_commands_produce_rows() {
    let cases: &[&[&str]] = &[
        &["kobayashi", "--z", "0,0", "--w", "0.5,0"],
        &["product", "--factors", "0.5,0.5"],
        &["limit", "--family", "punctured-exhaustion", "--z", "0.3,0", "--count", "5"],
        &["limit", "--family", "punctured-shrinking", "--z", "0.3,0", "--count", "5"],
        &["limit", "--family", "ball-exhaustion", "--z", "0.3,0,0.1,0", "--count", "5"],
        &["bounds", "--e", "1", "--rho", "0.5", "--depths", "0.1,0.01"],
        &["bounds", "--domain", "thullen:k=0.5", "--depth-grid", "1e-3:0.1:4", "--samples", "5000"],
        &["enclosing", "--domain", "ball:n=2", "--samples", "5000"],
        &["semicontinuity", "--domain", "ball:n=2", "--radii", "0.1,0.05", "--ring-samples", "4", "--samples", "5000"],
        &["catalog", "list"],
        &["catalog", "describe", "hartogs-triangle"],
        &["catalog", "describe", "moebius:a=0.5"],
        &["verify-embedding", "--embedding", "moebius:a=0.5", "--r", "0.45,0.55", "--grid", "21", "--samples", "5000"],
        &["support-scan", "--eps", "0.01", "--grid", "200"],
    ];
    for args in cases {
        let v = json(&run(args));
        let rows = v["rows"].as_array().unwrap();
        assert!(!rows.is_empty(), "{args:?}");
        if args[0] != "catalog" {
            assert!(rows.iter().all(|r| r.get("provenance").is_some()), "{args:?}: row without provenance");
        }
    }
    let v = json(&run(&["kobayashi", "--z", "0,0", "--w", "0.5,0"]));
    assert!((v["rows"][0]["distance"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-14);
    let v = json(&run(&["verify-embedding", "--embedding", "moebius:a=0.5", "--r", "0.45,0.55", "--grid", "21", "--samples", "5000"]));
    assert_eq!(v["rows"][1]["status"], "Included");
    assert_eq!(v["rows"][2]["status"], "Excluded");
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"pinch\"\ndomain = \"thullen:k=0.5\"\npoint = [1, 0, 0, 0]\nsamples = 5000\nseed = 9\n").unwrap();
    let out_a = dir.path().join("a.json");
    let a = run(&["--config", cfg.to_str().unwrap(), "--output", out_a.to_str().unwrap()]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&["pinch", "--domain", "thullen:k=0.5", "--point", "1,0,0,0", "--samples", "5000", "--seed", "9"]);
    assert_eq!(std::fs::read(&out_a).unwrap(), b.stdout);

    let jcfg = dir.path().join("run.json");
    std::fs::write(&jcfg, r#"{"command": "envelope", "relation": "KKE", "s": [0.5, 0.9], "n": 1}"#).unwrap();
    let v = json(&run(&["--config", jcfg.to_str().unwrap()]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][1]["consistent"], false);
    // Explicit flags override the file.
    let v = json(&run(&["--config", jcfg.to_str().unwrap(), "--n", "3"]));
    assert_eq!(v["inputs"]["n"], 3);
}

#[test]
fn exit_codes_and_hints() {
    let cases: &[(&[&str], i32)] = &[
        (&["pinch", "--domain", "nowhere"], 2),
        (&["pinch", "--domain", "ball:n=2", "--point", "0.5,0,0,0", "--samples", "2000"], 2),
        (&["pinch", "--domain", "ball:n=2", "--samples", "10"], 2),
        (&["envelope", "--relation", "XY", "--s", "0.5"], 2),
        (&["frobnicate"], 2),
        (&["thullen"], 2),
        (&["semicontinuity", "--domain", "reinhardt", "--samples", "2000"], 3),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("hint:"), "{args:?}: no hint in {err}");
    }
}

#[test]
fn low_sample_counts_warn() {
    let out = run(&["enclosing", "--domain", "ball:n=2", "--samples", "2000"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_squeeze-lab"))
        .args(["product", "--factors", "0.5"])
        .env("SQUEEZE_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seeds_change_sampled_output() {
    let a = run(&["enclosing", "--domain", "thullen:k=0.5", "--samples", "2000", "--seed", "1", "--refine-iterations", "0", "--no-local-limit"]);
    let b = run(&["enclosing", "--domain", "thullen:k=0.5", "--samples", "2000", "--seed", "2", "--refine-iterations", "0", "--no-local-limit"]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
}
