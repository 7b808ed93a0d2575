use std::path::Path;

use mixdelay::cli::run;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["mixdelay"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_decay_reports_final_value() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("decay");
    let (code, out) = invoke(&["simulate", "--model", "decay", "--horizon", "1", "--out", path_str(&stem)]);
    assert_eq!(code, 0);
    let manifest: Value = serde_json::from_str(&out).unwrap();
    assert!((manifest["final_value"].as_f64().unwrap() - (-1f64).exp()).abs() < 1e-9);
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,x");
    assert!(csv.lines().count() > 2);
    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    assert_eq!(on_disk, manifest);
}

#[test]
fn manifest_reruns_the_same_command() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("orbit");
    let (code, _) = invoke(&["simulate", "--model", "example1", "--horizon", "auto", "--out", path_str(&stem)]);
    assert_eq!(code, 0);
    let csv = std::fs::read(stem.with_extension("csv")).unwrap();
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    let command: Vec<String> =
        manifest["command"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    std::fs::remove_file(stem.with_extension("csv")).unwrap();
    let args: Vec<&str> = command.iter().map(String::as_str).collect();
    let (code, _) = invoke(&args);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read(stem.with_extension("csv")).unwrap(), csv);
    assert!((manifest["t_final"].as_f64().unwrap() - 10.0 * (59.0f64 / 24.0 * 134.0 / 15.0).ln()).abs() < 1e-9);
}

#[test]
fn simulate_mg_unbounded_shows_peaks() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("mg");
    let (code, out) = invoke(&["simulate", "--model", "mg-unbounded", "--cycles", "8", "--out", path_str(&stem)]);
    assert_eq!(code, 0);
    let manifest: Value = serde_json::from_str(&out).unwrap();
    assert!((manifest["final_value"].as_f64().unwrap() - 256.0).abs() < 1e-4);
    let mut reader = csv::Reader::from_path(stem.with_extension("csv")).unwrap();
    let max = reader.records().map(|r| r.unwrap()[1].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!((max - 256.0).abs() < 1e-4);
}

#[test]
fn blow_up_exits_zero_with_flag() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("eq7a");
    let (code, out) = invoke(&["simulate", "--model", "eq7a", "--horizon", "20", "--out", path_str(&stem)]);
    assert_eq!(code, 0);
    let manifest: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(manifest["blow_up"], true);
    assert!(manifest["t_final"].as_f64().unwrap() < 20.0);
}

fn verdict<'a>(report: &'a Value, id: &str) -> &'a str {
    report["reports"].as_array().unwrap().iter().find(|r| r["criterion"] == id).unwrap()["verdict"].as_str().unwrap()
}

#[test]
fn check_examples() {
    let (code, out) = invoke(&["check", "--model", "mg-permanent"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(verdict(&r, "permanent-8a"), "holds");
    assert!(r["envelope"]["upper"].as_f64().unwrap() > r["envelope"]["lower"].as_f64().unwrap());

    let (_, out) = invoke(&["check", "--model", "product-unbounded"]);
    assert_eq!(verdict(&serde_json::from_str(&out).unwrap(), "unbounded-9"), "holds");

    let (_, out) = invoke(&["check", "--model", "decay"]);
    assert_eq!(verdict(&serde_json::from_str(&out).unwrap(), "persistent-7a"), "fails");
}

#[test]
fn reproduce_passes_for_named_examples() {
    for label in ["example1", "mg-unbounded", "linear-unbounded", "mg-permanent"] {
        let (code, out) = invoke(&["reproduce", label]);
        assert_eq!(code, 0, "{label}:\n{out}");
        assert!(!out.contains("MISMATCH"), "{out}");
    }
}

#[test]
fn exit_code_contract() {
    assert_eq!(invoke(&["simulate"]).0, 2);
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["simulate", "--model", "no-such-model"]).0, 2);
    assert_eq!(invoke(&["reproduce", "no-such-model"]).0, 2);
    assert_eq!(invoke(&["check", "--model", "decay", "--config", "x.toml"]).0, 2);
    assert_eq!(invoke(&["simulate", "--model", "decay", "--horizon", "soon"]).0, 2);
    assert_eq!(invoke(&["check", "--config", "/nonexistent/model.toml"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "kind = \"mackey-glass\"\na = -1.0\nb = 1.0\nn = 2.0\nh = { lag = 1.0 }\np = { lag = 1.0 }\n")
        .unwrap();
    assert_eq!(invoke(&["check", "--config", path_str(&bad)]).0, 2);
}

const MG_FILE: &str = r#"
label = "mg-file"
kind = "mackey-glass"
a = 2.0
b = 1.0
n = 2.0
h = { lag = 1.0 }
p = { lag = 0.5 }
history = { constant = 0.5 }
"#;

#[test]
fn config_file_matches_catalog_model() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mg.toml");
    std::fs::write(&cfg, MG_FILE).unwrap();
    let (code, from_file) = invoke(&["check", "--config", path_str(&cfg)]);
    assert_eq!(code, 0);
    let (_, from_catalog) = invoke(&["check", "--model", "mg-permanent"]);
    let (a, b): (Value, Value) =
        (serde_json::from_str(&from_file).unwrap(), serde_json::from_str(&from_catalog).unwrap());
    assert_eq!(a["reports"], b["reports"]);
    assert_eq!(a["model"], "mg-file");
}

#[test]
fn classify_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let (code, _) = invoke(&[
        "classify",
        "--model",
        "linear-unbounded",
        "--horizon",
        "30",
        "--thresholds",
        "10,100",
        "--tail-fraction",
        "0.25",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["classification"]["growth"]["flag"], "growing");
    assert_eq!(v["manifest"]["model"], "linear-unbounded");
}

fn sweep(config: &str) -> Vec<csv::StringRecord> {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let out = dir.path().join("sweep.csv");
    std::fs::write(&cfg, config).unwrap();
    let (code, _) = invoke(&["sweep", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(code, 0);
    let mut r = csv::Reader::from_path(out).unwrap();
    let header = r.headers().unwrap().clone();
    std::iter::once(header).chain(r.records().map(Result::unwrap)).collect()
}

fn column(rows: &[csv::StringRecord], name: &str) -> Vec<String> {
    let i = rows[0].iter().position(|h| h == name).unwrap();
    rows[1..].iter().map(|r| r[i].to_string()).collect()
}

#[test]
fn sweep_persistence_flips_at_one() {
    let rows = sweep(
        r#"
        horizon = 30.0
        [params]
        a = [0.5, 1.0, 2.0, 4.0]
        [base]
        kind = "mackey-glass"
        a = 1.0
        b = 1.0
        n = 2.0
        h = { lag = 1.0 }
        p = { lag = 1.0 }
        "#,
    );
    assert_eq!(column(&rows, "a"), ["0.5", "1", "2", "4"]);
    assert_eq!(column(&rows, "persistent-7b"), ["fails", "inconclusive", "holds", "holds"]);
}

#[test]
fn sweep_separates_bounded_and_unbounded() {
    let rows = sweep(
        r#"
        horizon = 20.0
        [params]
        a = [1.0, 3.0]
        [base]
        kind = "product-delay"
        a = 1.0
        b = 2.0
        c = 1.0
        h = 1.0
        g = 1.0
        n = 1.0
        history = { constant = 2.0 }
        "#,
    );
    let unbounded = column(&rows, "unbounded-9");
    assert_eq!(column(&rows, "bounded-4a")[0], "holds");
    assert_ne!(unbounded[0], "holds");
    assert_eq!(unbounded[1], "holds");
}

#[test]
fn single_point_sweep_matches_check_and_classify() {
    let rows = sweep(
        r#"
        horizon = 40.0
        [params]
        a = [2.0]
        [base]
        kind = "mackey-glass"
        a = 1.0
        b = 1.0
        n = 2.0
        h = { lag = 1.0 }
        p = { lag = 0.5 }
        history = { constant = 0.5 }
        "#,
    );
    let (_, report) = invoke(&["check", "--model", "mg-permanent"]);
    let report: Value = serde_json::from_str(&report).unwrap();
    for r in report["reports"].as_array().unwrap() {
        let id = r["criterion"].as_str().unwrap();
        assert_eq!(column(&rows, id)[0], r["verdict"].as_str().unwrap(), "{id}");
    }
    let (_, c) = invoke(&["classify", "--model", "mg-permanent", "--horizon", "40"]);
    let c: Value = serde_json::from_str(&c).unwrap();
    let tail_inf: f64 = column(&rows, "tail_inf")[0].parse().unwrap();
    assert_eq!(tail_inf, c["classification"]["tail_inf"].as_f64().unwrap());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mixdelay");
    let status = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["check", "--model", "decay"]), Some(0));
    assert_eq!(status(&["check"]), Some(2));
    assert_eq!(status(&["reproduce", "nope"]), Some(2));
}
