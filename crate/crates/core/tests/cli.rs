use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::io::Write;

use heavyratio::cli::ESTIMATE_CSV_HEADER;
use heavyratio::montecarlo::SWEEP_CSV_HEADER;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heavyratio"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn schema(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "schemas", name].iter().collect();
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Checks the subset of JSON Schema used by the committed schemas.
fn validate(value: &Value, schema: &Value, at: &str) -> Result<(), String> {
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().map(|v| v.as_str().unwrap()).collect(),
            _ => unreachable!(),
        };
        let ok = types.iter().any(|t| match *t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            "integer" => value.is_u64() || value.is_i64(),
            "number" => value.is_number(),
            _ => false,
        });
        if !ok {
            return Err(format!("{at}: expected {types:?}, got {value}"));
        }
    }
    if let Some(Value::Array(allowed)) = schema.get("enum") {
        if !allowed.contains(value) {
            return Err(format!("{at}: {value} not in {allowed:?}"));
        }
    }
    if let (Some(obj), Some(props)) = (value.as_object(), schema.get("properties").and_then(Value::as_object)) {
        for req in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = req.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{at}: missing key {key}"));
            }
        }
        for (k, v) in obj {
            match props.get(k) {
                Some(sub) => validate(v, sub, &format!("{at}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(sub)) = (value.as_array(), schema.get("items")) {
        for (i, v) in items.iter().enumerate() {
            validate(v, sub, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

fn schema_keys(name: &str) -> Vec<String> {
    schema(name)["properties"].as_object().unwrap().keys().cloned().collect()
}

fn simulate_to(dir: &Path, dist: &str, n: usize, seed: u64) -> PathBuf {
    let path = dir.join(format!("{}-{n}-{seed}.txt", dist.replace(':', "_")));
    let o = run(&[
        "simulate", "--dist", dist, "--n", &n.to_string(), "--seed", &seed.to_string(), "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path
}

#[test]
fn simulate_is_deterministic_and_respects_support() {
    let a = run(&["simulate", "--dist", "pareto:0.5", "--n", "5", "--seed", "1"]);
    let b = run(&["simulate", "--dist", "pareto:0.5", "--n", "5", "--seed", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let values: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values.len(), 5);
    assert!(values.iter().all(|&v| v >= 1.0));
    let c = run(&["simulate", "--dist", "pareto:0.5", "--n", "5", "--seed", "2"]);
    assert_ne!(text.as_bytes(), &c.stdout[..]);
}

#[test]
fn simulate_rejects_bad_index() {
    let o = run(&["simulate", "--dist", "pareto:1.5", "--n", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("(0, 1)"), "{}", stderr(&o));
    assert_eq!(code(&run(&["simulate", "--dist", "cauchy", "--n", "5"])), 1);
    assert_eq!(code(&run(&["simulate", "--dist", "normal:1"])), 1);
}

#[test]
fn simulate_huge_values_round_trip_through_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let path = simulate_to(dir.path(), "slowvary", 5000, 8);
    let text = std::fs::read_to_string(&path).unwrap();
    // exp(1/U) exceeds f64::MAX whenever U < 1/709.78
    assert!(text.lines().any(|l| l.parse::<f64>().map_or(true, f64::is_infinite)));
    let o = run(&["estimate", "--alpha", "2", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["beta_hat"].as_f64().unwrap() < 0.1);
}

#[test]
fn pipeline_estimate_recovers_index() {
    let sim = run(&["simulate", "--dist", "pareto:0.5", "--n", "1000000", "--seed", "11"]);
    assert_eq!(code(&sim), 0);
    let o = run_stdin(&["estimate", "--alpha", "2"], &sim.stdout);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    validate(&v, &schema("estimate.schema.json"), "$").unwrap();
    let b = v["beta_hat"].as_f64().unwrap();
    assert!((0.45..=0.55).contains(&b), "{v}");
    assert_eq!(v["block_size"], 1000);
    assert_eq!(v["n_blocks"], 1000);
    assert_eq!(v["hill_k"], 10_000);
    assert!(v["ci_low"].as_f64().unwrap() <= b && b <= v["ci_high"].as_f64().unwrap());
}

#[test]
fn estimate_csv_has_two_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = simulate_to(dir.path(), "pareto:0.5", 10_000, 2);
    let o = run(&["estimate", "--alpha", "1.5", "--format", "csv", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], ESTIMATE_CSV_HEADER);
    let mut keys = schema_keys("estimate.schema.json");
    keys.retain(|k| k != "command");
    let mut header: Vec<String> = lines[0].split(',').map(String::from).collect();
    keys.sort();
    header.sort();
    assert_eq!(header, keys);
    assert_eq!(lines[1].split(',').count(), lines[0].split(',').count());
}

#[test]
fn estimate_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("zero.txt", "# sample\n1.0\n2.0\n0\n3.0\n", "line 4"),
        ("nan.txt", "1.0\nNaN\n", "line 2"),
        ("inf.txt", "1.0\n2.0\ninf\n", "line 3"),
        ("neg.txt", "-1.0\n", "line 1"),
        ("text.txt", "1.0\nabc\n", "line 2"),
    ];
    for (name, body, needle) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        let o = run(&["estimate", "--alpha", "2", p.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{name}");
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
    let missing = dir.path().join("absent.txt");
    assert_eq!(code(&run(&["estimate", "--alpha", "2", missing.to_str().unwrap()])), 2);
}

#[test]
fn estimate_usage_errors() {
    let o = run_stdin(&["estimate", "--alpha", "2"], b"1.0\n2.0\n3.0\n");
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let o = run_stdin(&["estimate", "--alpha", "2.5"], b"1\n2\n3\n4\n");
    assert_eq!(code(&o), 1);
    let o = run_stdin(&["estimate"], b"1\n2\n3\n4\n");
    assert_eq!(code(&o), 1);
    let o = run_stdin(&["estimate", "--alpha", "2", "--block-size", "1"], b"1\n2\n3\n4\n");
    assert_eq!(code(&o), 1);
}

#[test]
fn sweep_csv_and_theory_column() {
    let args = ["sweep", "--dist", "pareto:0.5", "--alpha", "2", "--n-grid", "100,1000,10000", "--replicates", "100"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(header, SWEEP_CSV_HEADER);
    let cols: Vec<&str> = header.split(',').collect();
    let sch = schema("sweep.schema.json");
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let obj: serde_json::Map<String, Value> = cols
            .iter()
            .zip(&fields)
            .map(|(k, f)| (k.to_string(), serde_json::from_str(f).unwrap()))
            .collect();
        let obj = Value::Object(obj);
        validate(&obj, &sch, "$").unwrap();
        assert!((obj["gamma_theory"].as_f64().unwrap() - 0.5).abs() < 1e-12);
        rows += 1;
    }
    assert_eq!(rows, 3);

    let e = run(&["sweep", "--dist", "exp:1", "--alpha", "2", "--n-grid", "100,1000", "--replicates", "20"]);
    assert_eq!(code(&e), 0);
    let text = String::from_utf8(e.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(3) == Some("0")));
}

#[test]
fn sweep_usage_errors() {
    for grid in ["100,abc", "", "100,,1000", "1000,100", "0,10"] {
        let o = run(&["sweep", "--dist", "pareto:0.5", "--alpha", "2", "--n-grid", grid]);
        assert_eq!(code(&o), 1, "grid {grid:?}: {}", stderr(&o));
    }
    let o = run(&["sweep", "--dist", "normal:1", "--alpha", "2", "--n-grid", "10"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_default_passes_and_matches_schema() {
    let o = run(&["verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    validate(&v, &schema("verify.schema.json"), "$").unwrap();
    assert_eq!(v["all_pass"], true);
    let suites: std::collections::BTreeSet<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["suite"].as_str().unwrap())
        .collect();
    assert_eq!(suites.len(), 6);
}

#[test]
fn verify_single_levy_point() {
    let o = run(&["verify", "--suite", "levy", "--beta", "0.5", "--alpha", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert!((checks[0]["target"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn verify_tight_tolerance_exits_three() {
    let o = run(&["verify", "--tol", "1e-9", "--replicates", "2000"]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    validate(&v, &schema("verify.schema.json"), "$").unwrap();
    assert_eq!(v["all_pass"], false);
    let failed = v["checks"].as_array().unwrap().iter().find(|c| c["pass"] == false).unwrap();
    assert!(failed["measured"].is_number() && failed["target"].is_number());
}

#[test]
fn verify_usage_errors() {
    assert_eq!(code(&run(&["verify", "--suite", "nonsense"])), 1);
    assert_eq!(code(&run(&["verify", "--suite", "levy", "--beta", "1.5"])), 1);
    assert_eq!(code(&run(&["verify", "--alpha", "2"])), 1);
    assert_eq!(code(&run(&["verify", "--levy-tol", "0"])), 1);
}

#[test]
fn general_usage() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    let help = run(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("simulate"));
    assert_eq!(code(&run(&["--threads", "0", "sweep", "--dist", "exp:1", "--alpha", "2", "--n-grid", "10"])), 1);
}

#[test]
fn output_file_and_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.txt");
    let o = run(&["simulate", "--dist", "exp:1", "--n", "3", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 3);
    let bad = dir.path().join("no/such/dir/out.txt");
    let o = run(&["simulate", "--dist", "exp:1", "--n", "3", "--out", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn thread_count_does_not_change_bytes() {
    let args = ["sweep", "--dist", "slowvary", "--alpha", "1.5", "--n-grid", "10,100,1000", "--replicates", "200"];
    let reference = run(&args).stdout;
    for t in ["1", "2", "8"] {
        let mut full = vec!["--threads", t];
        full.extend_from_slice(&args);
        assert_eq!(run(&full).stdout, reference, "threads {t}");
    }
}
