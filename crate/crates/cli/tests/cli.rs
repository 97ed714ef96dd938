use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "tests",
        "fixtures",
        name,
    ]
    .iter()
    .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgeideal"))
        .args(args)
        .output()
        .unwrap()
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, code)
}

fn code_of(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn graph_doc(c: usize, arcs: &[(usize, usize)]) -> String {
    let mut edges: Vec<String> = (1..=c).map(|i| format!("[\"x{i}\",\"y{i}\"]")).collect();
    edges.extend(arcs.iter().map(|(i, j)| format!("[\"x{i}\",\"y{j}\"]")));
    let left: Vec<String> = (1..=c).map(|i| format!("\"x{i}\"")).collect();
    let right: Vec<String> = (1..=c).map(|i| format!("\"y{i}\"")).collect();
    format!(
        r#"{{"left":[{}],"right":[{}],"edges":[{}]}}"#,
        left.join(","),
        right.join(","),
        edges.join(",")
    )
}

/// The six-element crown: not two-dimensional.
fn crown() -> String {
    let arcs: Vec<(usize, usize)> = (1..=3)
        .flat_map(|i| (1..=3).filter(move |&j| j != i).map(move |j| (i, 3 + j)))
        .collect();
    graph_doc(6, &arcs)
}

#[test]
fn classify_reports() {
    let (v, code) = json_of(&["classify", &fixture("k22.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["classification"], "Unmixed");
    assert_eq!(v["acyclic_reduction"]["t"], 1);
    assert_eq!(v["acyclic_reduction"]["zeta"], serde_json::json!([2]));

    let (v, _) = json_of(&["classify", &fixture("seven_vertex_cm.json")]);
    assert_eq!(v["classification"], "CohenMacaulay");
    assert_eq!(v["acyclic_reduction"]["t"], 7);

    let star = r#"{"left":["a"],"right":["b","c"],"edges":[["a","b"],["a","c"]]}"#;
    assert_eq!(
        json_of(&["classify", star]).0["classification"],
        "NoPerfectMatching"
    );
    let path = graph_doc(3, &[(1, 2), (2, 3)]);
    assert_eq!(
        json_of(&["classify", &path]).0["classification"],
        "PerfectlyMatchedOnly"
    );
}

#[test]
fn invariants_with_oracle() {
    let (v, code) = json_of(&["invariants", "--oracle", &fixture("k22.json")]);
    assert_eq!(code, 0);
    assert_eq!(
        (
            v["regularity"].as_u64(),
            v["depth"].as_u64(),
            v["projdim"].as_u64()
        ),
        (Some(1), Some(1), Some(3))
    );
    assert_eq!(v["oracle"]["agrees"], true);
    assert_eq!(v["oracle"]["field"], "QQ");

    let (v, _) = json_of(&[
        "invariants",
        "--oracle",
        "--field",
        "p:3",
        &fixture("seven_vertex_cm.json"),
    ]);
    assert_eq!(
        (v["regularity"].as_u64(), v["depth"].as_u64()),
        (Some(3), Some(7))
    );
    assert_eq!(v["r_lower"], 3);
    assert_eq!(v["oracle"]["field"], "GF(3)");
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn oracle_too_large_is_refused() {
    assert_eq!(
        code_of(&[
            "invariants",
            "--oracle",
            "--max-oracle-vars",
            "4",
            &fixture("k22.json")
        ]),
        0
    );
    assert_eq!(
        code_of(&[
            "invariants",
            "--oracle",
            "--max-oracle-vars",
            "3",
            &fixture("k22.json")
        ]),
        1
    );
}

#[test]
fn stci_seven_vertex_example() {
    let (v, code) = json_of(&[
        "stci",
        "--verify",
        "--embedding",
        &fixture("seven_vertex_cm_embedding.json"),
        &fixture("seven_vertex_cm.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 7);
    assert_eq!(v["generators"][0], "x1*y6");
    assert_eq!(v["generators"][6], "x7*y7 + x5*y5 + x2*y2");
    assert_eq!(v["verification"]["verified"], true);
    assert_eq!(v["verification"]["field"], "GF(32003)");
    assert_eq!(v["verification"]["checks"].as_array().unwrap().len(), 20);
    assert!(v["verification"].get("total_millis").is_none());
}

#[test]
fn stci_k22_over_rationals() {
    let (v, code) = json_of(&["stci", "--verify", "--field", "q", &fixture("k22.json")]);
    assert_eq!(code, 0);
    assert_eq!(
        v["generators"],
        serde_json::json!(["x1*y2", "x2*y2 + x1*y1", "x2*y1"])
    );
    assert_eq!(v["verification"]["verified"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(code_of(&["stci", &crown()]), 4);
    assert_eq!(code_of(&["invariants", &fixture("eight_cycle.json")]), 3);
    assert_eq!(code_of(&["classify", "{not json"]), 2);
    assert_eq!(
        code_of(&[
            "classify",
            r#"{"left":["a"],"right":["b"],"edges":[["a","z"]]}"#
        ]),
        2
    );
    assert_eq!(code_of(&["classify", "/no/such/file.json"]), 1);
    assert_eq!(
        code_of(&["oracle", "--field", "p:4", &fixture("k22.json")]),
        2
    );
    let bad_embedding = r#"{"x1":[0,0],"x2":[0,0]}"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("emb.json");
    std::fs::write(&path, bad_embedding).unwrap();
    assert_eq!(
        code_of(&[
            "stci",
            "--embedding",
            path.to_str().unwrap(),
            &fixture("k22.json")
        ]),
        1
    );
}

#[test]
fn primes_and_oracle() {
    let (v, code) = json_of(&["primes", &fixture("k22.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 2);
    assert_eq!(v["covers_agree"], true);

    let (v, code) = json_of(&["oracle", &fixture("eight_cycle.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["regularity"], 3);
    assert_eq!(v["projdim"], 5);
}

#[test]
fn gen_writes_usable_instances() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (v, code) = json_of(&[
        "gen",
        r#"{"mode":"sharp_depth","t":3,"c":5}"#,
        "--out-dir",
        out,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 1);
    let graph = dir.path().join("instance_0.json");
    let (inv, _) = json_of(&["invariants", graph.to_str().unwrap()]);
    assert_eq!(inv["depth"], 3);
    assert_eq!(inv["scc_count"], 3);

    let (v, _) = json_of(&[
        "gen",
        r#"{"mode":"random2d","n":6,"seed":1}"#,
        "--out-dir",
        out,
    ]);
    assert!(v["instances"][0]["embedding"].is_object());
    let emb = dir.path().join("instance_0_embedding.json");
    let graph = dir.path().join("instance_0.json");
    let (s, code) = json_of(&[
        "stci",
        "--verify",
        "--embedding",
        emb.to_str().unwrap(),
        graph.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(s["verification"]["verified"], true);
}

#[test]
fn gen_is_deterministic_and_seed_overrides() {
    let spec = r#"{"mode":"random_unmixed","t":3,"c":5,"density":0.5,"seed":1}"#;
    let a = run(&["gen", spec]).stdout;
    assert_eq!(a, run(&["gen", spec]).stdout);
    let b = run(&["gen", spec, "--seed", "99"]).stdout;
    assert_eq!(
        b,
        run(&["gen", &spec.replace("\"seed\":1", "\"seed\":99")]).stdout
    );
    assert_eq!(
        json_of(&["gen", r#"{"mode":"enumerate","c":2}"#]).0["count"],
        4
    );
    assert_eq!(code_of(&["gen", r#"{"mode":"nope"}"#]), 2);
}

#[test]
fn check_suite_and_negative_control() {
    let (v, code) = json_of(&["check"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["instances"], 34);

    let (v, code) = json_of(&["check", "--mutate", "--max-c", "2"]);
    assert_eq!(code, 6);
    let failed: Vec<&Value> = v["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| !o["failures"].as_array().unwrap().is_empty())
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "grid_structure");

    let (v, code) = json_of(&[
        "check", "--suite", "random", "--count", "10", "--seed", "5", "--verify",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["seed"], 5);
}

#[test]
fn output_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "--quiet",
        "--json",
        path.to_str().unwrap(),
        "invariants",
        &fixture("k22.json"),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "invariants");

    let out = run(&["--pretty", "stci", &fixture("k22.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("h1    x2*y1"), "{text}");

    let out = Command::new(env!("CARGO_BIN_EXE_edgeideal"))
        .args(["check", "--max-c", "2"])
        .env("EDGEIDEAL_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_edgeideal"))
        .args(["classify", &fixture("k22.json")])
        .env("EDGEIDEAL_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verified_report_is_deterministic() {
    let args = ["stci", "--verify", &fixture("k22.json")];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
