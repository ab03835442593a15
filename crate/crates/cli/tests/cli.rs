use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn kummer(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kummer")).arg("--out").arg(out).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    crate_dir().join("configs").join(name).to_string_lossy().into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(schema: &str, instance: &Value) {
    let schema = read_json(&crate_dir().join("schemas").join(schema));
    let compiled = JSONSchema::compile(&schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{msgs:?}");
}

#[test]
fn passing_suite_writes_check_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = kummer(dir.path(), &["verify", "scalar", "fixed-point"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("verify-scalar-fixed-point.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("check,value,bound,pass"));
    assert_eq!(lines.filter(|l| l.ends_with(",true")).count(), 3);
    assert_valid("verify-report.schema.json", &read_json(&dir.path().join("verify-scalar-fixed-point.json")));
}

#[test]
fn failing_check_exits_two_and_unknown_model_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = kummer(dir.path(), &["verify", "taub-nut", "refined"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("slope-with-h4"));
    assert_eq!(kummer(dir.path(), &["verify", "kerr", "decay"]).status.code(), Some(1));
    assert_eq!(kummer(dir.path(), &["verify", "taub-nut", "decay"]).status.code(), Some(1));
}

#[test]
fn topology_tables_are_valid_and_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (sel, stem) in [
        (&["catalogue"][..], "catalogue"),
        (&["family", "A"][..], "family-a"),
        (&["family", "D"][..], "family-d"),
        (&["fillability"][..], "fillability"),
        (&["flat3"][..], "flat3"),
    ] {
        let mut args = vec!["topology"];
        args.extend_from_slice(sel);
        for d in [&a, &b] {
            assert_eq!(kummer(d.path(), &args).status.code(), Some(0), "{sel:?}");
        }
        for ext in ["csv", "json"] {
            let name = format!("topology-{stem}.{ext}");
            assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name}");
        }
        assert_valid("topology-tables.schema.json", &read_json(&a.path().join(format!("topology-{stem}.json"))));
    }
    let fill = fs::read_to_string(a.path().join("topology-fillability.csv")).unwrap();
    assert!(fill.contains("D1,1/3,-1/3,true,true,D3"));
    assert!(fill.contains("D5,-1,1,true,false,"));
}

#[test]
fn unknown_selector_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("never");
    let out = kummer(&out_dir, &["topology", "hexagon"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_dir.exists());
    assert_eq!(kummer(&out_dir, &["topology", "family", "E"]).status.code(), Some(1));
}

#[test]
fn shipped_configs_match_the_schema() {
    for name in ["alh-x1.json", "alh-x1-enforced.json", "manufactured.json"] {
        assert_valid("solver-config.schema.json", &read_json(Path::new(&config(name))));
    }
}

#[test]
fn manufactured_solve_writes_report_residuals_and_field() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(kummer(a.path(), &["solve", &config("manufactured.json")]).status.code(), Some(0));
    assert_eq!(kummer(b.path(), &["--threads", "1", "solve", &config("manufactured.json")]).status.code(), Some(0));
    for name in ["solve-report.json", "residuals.csv", "recovery.json", "psi.f64"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let report = read_json(&a.path().join("solve-report.json"));
    assert_valid("solve-report.schema.json", &report);
    assert_valid("recovery.schema.json", &read_json(&a.path().join("recovery.json")));
    assert!(read_json(&a.path().join("recovery.json"))["error"].as_f64().unwrap() < 1e-3);

    let residuals = fs::read_to_string(a.path().join("residuals.csv")).unwrap();
    let iterations = report["iterations"].as_u64().unwrap() as usize;
    assert_eq!(residuals.lines().count(), iterations + 2);

    let dump = fs::read(a.path().join("psi.f64")).unwrap();
    let split = dump.iter().position(|&c| c == b'\n').unwrap();
    let header: Value = serde_json::from_slice(&dump[..split]).unwrap();
    assert_valid("field-header.schema.json", &header);
    let n: u64 = header["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).product();
    let body = &dump[split + 1..];
    assert_eq!(body.len() as u64, 8 * n);
    let first = f64::from_le_bytes(body[..8].try_into().unwrap());
    assert!(first.is_finite() && first.abs() < 0.1);

    let meta = read_json(&a.path().join("run.meta.json"));
    assert_valid("run-meta.schema.json", &meta);
    assert!(meta["started_unix_ms"].as_u64().unwrap() > 0);
}

#[test]
fn enforced_smallness_exits_three_with_diagnosis() {
    let dir = tempfile::tempdir().unwrap();
    let out = kummer(dir.path(), &["solve", &config("alh-x1-enforced.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("‖Φ(0)‖ > r/2c"));
    let report = read_json(&dir.path().join("solve-report.json"));
    assert_valid("solve-report.schema.json", &report);
    assert!(report["diagnosis"].as_str().unwrap().contains("‖Φ(0)‖ > r/2c"));
    assert_eq!(report["converged"], Value::Bool(false));
}

#[test]
fn malformed_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(config("manufactured.json")).unwrap().replacen("\"tol\"", "\"tolerance\": 1, \"tol\"", 1);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, text).unwrap();
    assert_eq!(kummer(&dir.path().join("out"), &["solve", bad.to_str().unwrap()]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(kummer(&dir.path().join("out"), &["solve", missing.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(kummer(&dir.path().join("out"), &["--threads", "0", "topology", "flat3"]).status.code(), Some(1));
}
