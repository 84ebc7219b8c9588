use std::fs;
use std::process::Command;

use serde_json::Value;
use supkit::proofs::corpus;
use supkit_cli::{run, EXIT_OK, EXIT_REJECTED, EXIT_USAGE};

const S4: &str = "(p0 sup p1) sup p2 -> p0 sup (p1 sup p2)";

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("supkit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn s4_valid_under_asso() {
    let (code, v) = call_json(&["taut", "--class", "asso", "--formula", S4]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"]["result"], "valid");
    assert_eq!(v["verdict"]["space"]["class"], "asso");
}

#[test]
fn s4_countermodel_under_all_reverifies_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let t = dir.path().join("t.json");
    let (code, v) = call_json(&[
        "taut",
        "--class",
        "all",
        "--formula",
        S4,
        "--model-out",
        m.to_str().unwrap(),
        "--table-out",
        t.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_REJECTED);
    assert_eq!(v["verdict"]["countermodel"]["reverified"], true);
    let table: Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    let entries = table["entries"].as_array().unwrap();
    assert!(!entries.is_empty());

    let (code, out, _) = call(&["eval", "--scs", S4, "--model", m.to_str().unwrap(), "--table", t.to_str().unwrap()]);
    assert_eq!(code, EXIT_REJECTED);
    assert_eq!(out.trim(), "false");

    // Every one of the three pairs is chosen, so the table cannot be associative.
    let (code, _, _) = call(&["taut", "--class", "asso", "--formula", S4]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn consequence_countermodel_satisfies_premise() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let t = dir.path().join("t.json");
    let (code, _, _) = call(&[
        "consequence",
        "--premise",
        "p0 \\/ p1",
        "--formula",
        "p0 sup p1",
        "--model-out",
        m.to_str().unwrap(),
        "--table-out",
        t.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_REJECTED);
    let (m, t) = (m.to_str().unwrap(), t.to_str().unwrap());
    assert_eq!(call(&["eval", "--scs", "p0 \\/ p1", "--model", m, "--table", t]).0, EXIT_OK);
    assert_eq!(call(&["eval", "--scs", "p0 sup p1", "--model", m, "--table", t]).0, EXIT_REJECTED);

    let (code, _, _) = call(&["consequence", "--premise", "p0 /\\ p1", "--formula", "p0 sup p1"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn no_uniform_traces_both_branches() {
    let (code, v) = call_json(&["demo", "no-uniform", "--alpha", "P(v)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["refutes"], true);
    let branches = v["refutation"]["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 2);
    assert!(branches.iter().all(|b| b["demand_holds"] == false));
}

#[test]
fn no_uniform_rejects_variable_free_alpha() {
    let (code, _, err) = call(&["demo", "no-uniform", "--alpha", "P(c)"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("error"));
}

#[test]
fn ui_failure_all_four_cases() {
    let (code, v) = call_json(&["demo", "ui-failure"]);
    assert_eq!(code, EXIT_OK);
    let cases = v["cases"].as_array().unwrap();
    let mut ids: Vec<u64> = cases.iter().map(|c| c["witness"]["case_id"].as_u64().unwrap()).collect();
    ids.sort();
    assert_eq!(ids, [1, 2, 3, 4]);
    for c in cases {
        assert_eq!(c["witness"]["closure_holds"], true);
        assert_eq!(c["witness"]["instance_holds"], false);
    }
    let (code, v) = call_json(&["demo", "ui-failure", "--case", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["cases"].as_array().unwrap().len(), 1);
    assert_eq!(call(&["demo", "ui-failure", "--case", "5"]).0, EXIT_USAGE);
}

#[test]
fn ui_failure_general_refutes() {
    let (code, v) = call_json(&["demo", "ui-failure-general"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["cases"].as_array().unwrap().len(), 4);
}

#[test]
fn object_superposition_dichotomy() {
    let (code, v) = call_json(&["demo", "object-superposition"]);
    assert_eq!(code, EXIT_OK);
    let rows = v["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!(!(r["unique"] == true && r["regular"] == true));
    }
    assert_eq!(call(&["demo", "object-superposition", "--size", "1"]).0, EXIT_USAGE);
}

#[test]
fn build_model_from_fragment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theory.json");
    fs::write(&path, r#"{"sentences": ["p0 sup p1"], "members": ["p0 sup p1", "p0"]}"#).unwrap();
    for class in ["all", "reg"] {
        let (code, v) = call_json(&["demo", "build-model", "--theory", path.to_str().unwrap(), "--class", class]);
        assert_eq!(code, EXIT_OK, "{class}: {v}");
        assert_eq!(v["check"]["satisfies"], true);
        assert_eq!(v["check"]["lemma"], true);
    }
    // `p0 sup p1` in, both operands out: no choice can make it true.
    fs::write(&path, r#"{"sentences": ["p0 sup p1"], "members": ["p0 sup p1"]}"#).unwrap();
    let (code, v) = call_json(&["demo", "build-model", "--theory", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_REJECTED);
    assert_eq!(v["built"], false);
}

#[test]
fn interpolation_sample_is_seeded() {
    let a = call(&["--json", "--seed", "9", "demo", "interpolation", "--sample", "15"]);
    let b = call(&["--json", "--seed", "9", "demo", "interpolation", "--sample", "15"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
    let (code, v) = call_json(&["demo", "interpolation", "--depth", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["report"]["pairs"], 144);
    assert_eq!(v["report"]["violation_count"], 0);
}

#[test]
fn check_proof_accepts_corpus_and_rejects_mutants() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let entry = &corpus::entries()[0];
    fs::write(&path, entry.proof.to_json()).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, err) = call(&["check-proof", p]);
    assert_eq!(code, EXIT_OK, "{out} {err}");
    assert!(out.starts_with("accepted"));
    let goal = entry.goal.to_string();
    assert_eq!(call(&["check-proof", p, "--goal", &goal]).0, EXIT_OK);
    assert_eq!(call(&["check-proof", p, "--goal", "p9"]).0, EXIT_REJECTED);

    for m in corpus::mutations() {
        fs::write(&path, m.proof.to_json()).unwrap();
        let (code, v) = call_json(&["check-proof", p]);
        assert_eq!(code, EXIT_REJECTED, "{}", m.name);
        assert_eq!(v["line"], m.line as u64, "{}", m.name);
    }
}

#[test]
fn parse_and_classify() {
    let (code, out, _) = call(&["classify", "p0 sup p1"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "basic"));
    let (code, out, _) = call(&["classify", "forall v. (P(v) sup Q(v))"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "restricted"));
    let (code, out, _) = call(&["classify", "(forall v. (P(v) sup Q(v))) sup p0"]);
    assert_eq!((code, out.trim()), (EXIT_OK, "unrestricted"));
    let (code, v) = call_json(&["parse", "p0 \\/ p1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["sentence"], true);
    assert_eq!(call(&["parse", "p0 sup"]).0, EXIT_USAGE);
}

#[test]
fn collapse_with_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    fs::write(&path, r#"{"mode": "sentence", "entries": [{"pair": ["p0", "p1"], "choice": "p1"}]}"#).unwrap();
    let (code, out, _) = call(&["collapse", "~(p0 sup p1)", "--table", path.to_str().unwrap()]);
    assert_eq!((code, out.trim()), (EXIT_OK, "~p1"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["eval", "p0", "--model", "/nonexistent/m.json", "--table", "/nonexistent/t.json", "--scs"]).0,
        EXIT_USAGE
    );
    assert_eq!(call(&["taut", "--class", "weird", "--formula", "p0"]).0, EXIT_USAGE);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Usage"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_supkit");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["taut", "--class", "asso", "--formula", S4]), Some(0));
    assert_eq!(status(&["taut", "--class", "all", "--formula", S4]), Some(1));
    assert_eq!(status(&["nope"]), Some(2));
    let out =
        Command::new(bin).args(["demo", "object-superposition"]).env("SUPKIT_ORACLE_BOUND", "2").output().unwrap();
    assert!(out.status.success());
}
