use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;

use grz_core::calculus::System;
use grz_core::proofs::CyclicProof;
use grz_core::prover::KripkeModel;
use grz_core::syntax::{f, parse_sequent};
use serde_json::Value;

const SHIPPED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/grz_schema_p.json");

fn grz(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_grz")).args(args).output().expect("run grz");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

/// Re-validates an emitted proof through the `check` verb and the library.
fn assert_checks(dir: &Path, name: &str, text: &str) -> CyclicProof {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    let (code, report) = grz(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{name}: {report}");
    assert_eq!(json(&report)["ok"], true);
    CyclicProof::from_json(&json(text)).unwrap()
}

fn model(v: &Value) -> (KripkeModel, usize) {
    let order: Vec<Vec<bool>> = serde_json::from_value(v["model"]["order"].clone()).unwrap();
    let val: BTreeMap<String, BTreeSet<usize>> = serde_json::from_value(v["model"]["valuation"].clone()).unwrap();
    (KripkeModel::new(order, val).unwrap(), v["world"].as_u64().unwrap() as usize)
}

#[test]
fn prove_theorem_and_non_theorem() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = grz(&["prove", "[]p -> p"]);
    assert_eq!(code, 0);
    let p = assert_checks(dir.path(), "t.json", &out);
    assert_eq!(p.root(), &parse_sequent("=> []p -> p").unwrap());

    let (code, out) = grz(&["prove", "p -> []p"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["verdict"], "countermodel");
    let (m, w) = model(&v);
    assert!(!m.eval(w, &f("p -> []p")));
}

#[test]
fn check_shipped_example_and_a_broken_copy() {
    let (code, out) = grz(&["check", SHIPPED]);
    assert_eq!(code, 0, "{out}");
    let dir = tempfile::tempdir().unwrap();
    let mut doc = json(&std::fs::read_to_string(SHIPPED).unwrap());
    doc["backlinks"]["9"] = 1.into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let (code, out) = grz(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["violations"][0]["kind"], "backlink_sequent_mismatch");
}

#[test]
fn transformations_emit_valid_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let root = parse_sequent("[]([](p -> []p) -> p) => p").unwrap();

    let (code, seq) = grz(&["translate", SHIPPED]);
    assert_eq!(code, 0);
    let p = assert_checks(d, "seq.json", &seq);
    assert_eq!(p.system, System::Seq);
    assert_eq!(p.root(), &root);

    let seq_path = d.join("seq.json");
    let (code, inf) = grz(&["translate", seq_path.to_str().unwrap(), "--to", "inf"]);
    assert_eq!(code, 0);
    assert!(assert_checks(d, "inf.json", &inf).uses_cut());

    let (code, cf) = grz(&["cutfree", seq_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let cf = assert_checks(d, "cf.json", &cf);
    assert!(!cf.uses_cut());
    assert_eq!(cf.root(), &root);

    for verb in ["slim", "regularize", "cutfree"] {
        let (code, out) = grz(&[verb, SHIPPED]);
        assert_eq!(code, 0, "{verb}");
        assert_eq!(assert_checks(d, &format!("{verb}.json"), &out).root(), &root);
    }
    let (code, _) = grz(&["translate", SHIPPED, "--to", "inf"]);
    assert_eq!(code, 2);
}

#[test]
fn corpus_is_seeded_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let (code, a) = grz(&["corpus", "--count", "3", "--seed", "5"]);
    assert_eq!(code, 0);
    let (_, b) = grz(&["corpus", "--count", "3", "--seed", "5"]);
    assert_eq!(a, b);
    let (_, c) = grz(&["corpus", "--count", "3", "--seed", "6"]);
    assert_ne!(a, c);
    let proofs = json(&a);
    let proofs = proofs.as_array().unwrap();
    assert_eq!(proofs.len(), 3);
    for (i, p) in proofs.iter().enumerate() {
        let p = assert_checks(dir.path(), &format!("c{i}.json"), &p.to_string());
        assert_eq!(p.system, System::SeqCut);
        let path = dir.path().join(format!("c{i}.json"));
        let (code, out) = grz(&["cutfree", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let cf = assert_checks(dir.path(), &format!("cf{i}.json"), &out);
        assert_eq!(cf.root(), p.root());
        assert!(!cf.uses_cut());
    }
}

#[test]
fn interpolate_reports_and_verifies() {
    let (code, out) = grz(&["interpolate", "[]p & [](p -> q)", "[]q"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["verified"], true);
    let c = f(v["interpolant"].as_str().unwrap());
    let atoms: BTreeSet<String> = c.atoms().into_iter().collect();
    assert!(atoms.is_subset(&BTreeSet::from(["p".to_string(), "q".to_string()])));
    for ob in ["left_obligation", "right_obligation"] {
        let (code, _) = grz(&["prove", v[ob].as_str().unwrap()]);
        assert_eq!(code, 0, "{ob}");
    }
    let (code, out) = grz(&["interpolate", "p", "q"]);
    assert_eq!(code, 1);
    let (m, w) = model(&json(&out));
    assert!(m.eval(w, &f("p")) && !m.eval(w, &f("q")));
}

#[test]
fn countermodel_and_export_dot() {
    let (code, out) = grz(&["countermodel", "<>p -> []<>p"]);
    assert_eq!(code, 0);
    let (m, w) = model(&json(&out));
    assert!(m.size() <= 4 && !m.eval(w, &f("<>p -> []<>p")));
    let (code, _) = grz(&["countermodel", "[]p -> [][]p"]);
    assert_eq!(code, 1);

    let (code, dot) = grz(&["export-dot", SHIPPED]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
    assert!(dot.matches("[label=").count() >= 10);
}

#[test]
fn errors_and_limits_exit_with_two() {
    assert_eq!(grz(&["prove", "p ->"]).0, 2);
    assert_eq!(grz(&["check", "/nonexistent/proof.json"]).0, 2);
    let (code, out) = grz(&["prove", "[]([](p -> []p) -> p) -> []p", "--max-nodes", "3"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"], "resource_limit");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path: PathBuf = dir.path().join("out.json");
    let (code, stdout) = grz(&["prove", "[]p -> [][]p", "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    CyclicProof::from_json(&json(&std::fs::read_to_string(&path).unwrap())).unwrap();
}
