use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_geopack");

fn geopack(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn reduce_then_solve_path() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(&dir, "p3.col", "c path\np edge 3 2\ne 1 2\ne 2 3\n");
    let inst = dir.path().join("inst.json").display().to_string();
    let out = geopack(&["reduce", "--graph", &graph, "--alpha", "1/20", "-o", &inst]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(written["d"], 3);
    assert_eq!(written["alpha"], "1/20");
    assert_eq!(
        written["boxes"][0],
        serde_json::json!(["1/20", "11/20", "1"])
    );

    let exact = json(&geopack(&["solve", "--exact", &inst, "--json"]));
    assert_eq!(exact["count"], 2);
    let ff = json(&geopack(&[
        "solve",
        "--first-fit",
        "--order",
        "0,2,1",
        &inst,
        "--json",
    ]));
    assert_eq!(ff["bins"], serde_json::json!([[0, 1], [2]]));
    let configs = json(&geopack(&["configs", &inst, "--json"]));
    assert_eq!(
        configs["configurations"],
        serde_json::json!([[0, 1], [1, 2]])
    );
    let fit = geopack(&["fit", &inst, "--grid", "20", "--json"]);
    assert_eq!(fit.status.code(), Some(0));
    assert_eq!(json(&fit)["fits"], false);
}

#[test]
fn fit_prints_a_checkable_placement() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        &dir,
        "q.json",
        r#"{"d": 2, "boxes": [["1/2","1/2"],["1/2","1/2"],["1/2","1/2"]]}"#,
    );
    let r = json(&geopack(&["fit", &inst, "--json"]));
    assert_eq!(r["fits"], true);
    let w = serde_json::json!({
        "kind": "placement",
        "d": 2,
        "boxes": [["1/2","1/2"],["1/2","1/2"],["1/2","1/2"]],
        "positions": r["placement"]["positions"],
    });
    let wpath = write(&dir, "w.json", &w.to_string());
    assert_eq!(geopack(&["check-witness", &wpath]).status.code(), Some(0));
}

#[test]
fn chromatic_of_k4() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(
        &dir,
        "k4.col",
        "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n",
    );
    let out = geopack(&["chromatic", "--graph", &k4]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "4\n");
    let comp = json(&geopack(&[
        "chromatic",
        "--graph",
        &k4,
        "--complement",
        "--json",
    ]));
    assert_eq!(comp["chromatic_number"], 1);
    assert_eq!(comp["colors"], serde_json::json!([0, 0, 0, 0]));
}

#[test]
fn family_violations_exit_one_with_checkable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let open = write(&dir, "open.fam", "universe 3\n0 1\n");
    let out = geopack(&["family", "check", &open, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["witness"]["kind"], "not-downward-closed");
    let report = write(&dir, "report.json", &String::from_utf8_lossy(&out.stdout));
    assert_eq!(geopack(&["check-witness", &report]).status.code(), Some(0));

    let isolated = write(&dir, "iso.fam", "universe 3\n0 1\nclosure\n");
    let out = geopack(&["family", "check", &isolated, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["witness"]["element"], 2);
}

#[test]
fn embeddings_verify_search_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write(&dir, "two.fam", "universe 4\n0 1\n2 3\nclosure\n");
    let emb = dir.path().join("two.emb").display().to_string();
    let out = geopack(&[
        "embed", "search", &fam, "--dim", "2", "--grid", "2", "-o", &emb,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        geopack(&["embed", "verify", &fam, &emb, "--exhaustive"])
            .status
            .code(),
        Some(0)
    );
    let none = json(&geopack(&[
        "embed", "search", &fam, "--dim", "1", "--grid", "4", "--json",
    ]));
    assert_eq!(none["found"], false);

    let bad = write(
        &dir,
        "bad.emb",
        r#"{"d": 1, "map": {"0": ["1/2"], "1": ["1/2"], "2": ["1/2"], "3": ["1/2"]}}"#,
    );
    let out = geopack(&["embed", "verify", &fam, &bad, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["violation"], "non-member-fits");
    assert_eq!(r["set"], serde_json::json!([0, 2]));
    let report = write(&dir, "r.json", &String::from_utf8_lossy(&out.stdout));
    assert_eq!(geopack(&["check-witness", &report]).status.code(), Some(0));
}

#[test]
fn matching_on_lines_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("l2.fam").display().to_string();
    assert_eq!(
        geopack(&["lines", "--n", "2", "-o", &lines]).status.code(),
        Some(0)
    );
    let r = json(&geopack(&["matching", &lines, "--exact", "--json"]));
    assert_eq!(r["size"], 1);
    assert_eq!(r["mode"], "exact");
    assert_eq!(r["conflict_vertices"], 48);
    let pairs = write(
        &dir,
        "pairs.fam",
        "universe 10\n0 1\n2 3\n4 5\n6 7\n8 9\nclosure\n",
    );
    let r = json(&geopack(&["matching", &pairs, "--json"]));
    assert_eq!(r["gpd_lower_bound"], 5);
    assert_eq!(r["warnings"], serde_json::json!([]));
}

#[test]
fn rejected_witness_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // The pair criterion is a theorem, so this claimed counterexample is false.
    let w = write(
        &dir,
        "w.json",
        r#"{"kind": "pair", "boxes": [["3/4", "3/4"], ["3/4", "1/4"]]}"#,
    );
    let out = geopack(&["check-witness", &w, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["confirmed"], false);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let decimal = write(&dir, "d.json", r#"{"d": 1, "boxes": [["0.5"]]}"#);
    assert_eq!(geopack(&["fit", &decimal]).status.code(), Some(2));
    assert_eq!(
        geopack(&["fit", "/nonexistent/x.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        geopack(&["verify-lemmas", "--lemma", "nope"]).status.code(),
        Some(2)
    );
    let graph = write(&dir, "g.col", "p edge 2 1\ne 1 2\n");
    assert_eq!(
        geopack(&["reduce", "--graph", &graph, "--alpha", "1/2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(geopack(&["solve", &decimal]).status.code(), Some(2));
    let out = geopack(&["fit", &decimal, "--json"]);
    assert_eq!(json(&out)["exit"], 2);
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("l2.fam").display().to_string();
    geopack(&["lines", "--n", "2", "-o", &lines]);
    let out = geopack(&[
        "--budget", "5", "embed", "search", &lines, "--dim", "1", "--grid", "12",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn starved_sampling_warns_but_passes() {
    let out = geopack(&[
        "verify-lemmas",
        "--lemma",
        "triple",
        "--trials",
        "3",
        "--max-dim",
        "2",
        "--max-den",
        "1",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["trials_run"], 0);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
}
