//! End-to-end checks of the binary: exit codes, JSON output, determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slopebound"))
}

fn run_ok(args: &[&str]) -> serde_json::Value {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn torus_knot_values() {
    let v = run_ok(&["bounds", "--op", "torus", "--data", r#"{"p":3,"q":5}"#]);
    assert_eq!(v["slope"], 15);
    assert_eq!(v["genus"], 4);
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = bin().args(["corpus", "--suite", "nope", "--count", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn not_coprime_is_usage_error() {
    let out = bin()
        .args(["bounds", "--op", "torus", "--data", r#"{"p":2,"q":4}"#])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bigirth_exact_on_theta_graph() {
    let dir = std::env::temp_dir().join("slopebound-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("theta.json");
    std::fs::write(&graph, r#"{"vertices":[0,1],"edges":[[0,1],[0,1],[0,1]]}"#).unwrap();
    let v = run_ok(&["bigirth", "--graph", graph.to_str().unwrap()]);
    assert_eq!(v["bigirth"], 3);
}

#[test]
fn tree_length_matches_oracle() {
    let dir = std::env::temp_dir().join("slopebound-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("mat.json");
    std::fs::write(&m, r#"{"entries":["3","0","0","1/3"]}"#).unwrap();
    let v = run_ok(&["tree", "--field", "p:3", "--op", "oracle", "--matrix", m.to_str().unwrap()]);
    assert_eq!(v["oracle"], 2);
    assert_eq!(v["agree"], true);
}

#[test]
fn corpus_reports_are_deterministic() {
    let dir = std::env::temp_dir().join("slopebound-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let out1 = dir.join("r1");
    let out2 = dir.join("r2");
    for out in [&out1, &out2] {
        let status = bin()
            .args([
                "corpus",
                "--suite",
                "norms-minkowski",
                "--count",
                "40",
                "--seed",
                "9",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(out1.with_extension("json")).unwrap();
    let b = std::fs::read(out2.with_extension("json")).unwrap();
    assert_eq!(a, b, "reports differ across runs");
    // CSV is a projection of the same data
    let csv = std::fs::read_to_string(out1.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn gen_roundtrips_through_validation() {
    let dir = std::env::temp_dir().join("slopebound-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("model.json");
    let v = run_ok(&["gen", "--kind", "arcmodel", "--seed", "5", "--size", "8"]);
    std::fs::write(&model, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run_ok(&["arcsys", "--model", model.to_str().unwrap(), "--op", "validate"]);
    assert!(out["arcs"].as_u64().unwrap() >= 2);
    assert!(out["genus"].as_u64().is_some());
}
