use std::path::{Path, PathBuf};
use std::process::Command;

use fragments_core::examples::{PHI1, PHI2};
use fragments_core::model::{holds, Signature};
use fragments_core::parse;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    json: Value,
    stdout: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fragments")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap(), json, stdout }
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn sibling(input: &str, name: &str) -> PathBuf {
    Path::new(input).with_file_name(name)
}

#[test]
fn classify_reports_both_fragments_of_the_second_example() {
    let dir = TempDir::new().unwrap();
    let phi2 = write(&dir, "phi2.fol", PHI2);
    let r = run(&["classify", &phi2, "--json"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdicts"]["fragments"], serde_json::json!(["GBSR", "GAF"]));
    assert!(r.json["verdicts"]["degree"].is_u64());
    assert_eq!(r.json["command"], "classify");
}

#[test]
fn classify_first_example_is_gaf_only() {
    let dir = TempDir::new().unwrap();
    let phi1 = write(&dir, "phi1.fol", PHI1);
    let r = run(&["classify", &phi1, "--json"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdicts"]["fragments"], serde_json::json!(["GAF"]));
    assert!(r.json["verdicts"]["gbsr_witness"].is_object());
}

#[test]
fn decide_unsat_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "unsat.fol", "exists X. (p(X) & ~p(X))");
    let r = run(&["decide", &f, "--json"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdicts"]["verdict"], "Unsat");
    assert_eq!(r.json["verdicts"]["method"], "bsr");
}

#[test]
fn decide_sat_writes_a_model_that_satisfies_the_sentence() {
    let dir = TempDir::new().unwrap();
    let text = "exists Y1 Y2. forall X. (p(Y1) & ~p(Y2) & (~p(X) | q(X)))";
    let f = write(&dir, "sat.fol", text);
    let r = run(&["decide", &f, "--json", "--no-timings"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdicts"]["verdict"], "Sat");
    let model = sibling(&f, "sat.model.json");
    assert_eq!(r.json["artifacts"], serde_json::json!([model.display().to_string()]));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(json["universe_size"], 2);
    let p = json["predicates"]["p"].as_array().unwrap();
    assert_eq!(p.len(), 1);
}

#[test]
fn decide_gbsr_goes_through_the_bsr_rewrite() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "phi2.fol", PHI2);
    let r = run(&["decide", &f, "--json"]);
    assert_eq!(r.json["verdicts"]["method"], "gbsr");
    assert_eq!(r.code, 0);
}

#[test]
fn to_bsr_rejects_the_first_example_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let phi1 = write(&dir, "phi1.fol", PHI1);
    let r = run(&["to-bsr", &phi1, "--json"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdicts"]["gbsr"], false);
    let w = &r.json["verdicts"]["witness"];
    assert!(w["variable"].is_string() && w["literal"].is_string());
    assert!(!sibling(&phi1, "phi1.bsr.fol").exists());
}

#[test]
fn to_bsr_writes_an_exists_forall_sentence() {
    let dir = TempDir::new().unwrap();
    let phi2 = write(&dir, "phi2.fol", PHI2);
    let r = run(&["to-bsr", &phi2, "--json", "--trace"]);
    assert_eq!(r.code, 0);
    assert!(!r.json["verdicts"]["stages"].as_array().unwrap().is_empty());
    let out = std::fs::read_to_string(sibling(&phi2, "phi2.bsr.fol")).unwrap();
    let c = run(&["classify", sibling(&phi2, "phi2.bsr.fol").to_str().unwrap(), "--json"]);
    assert!(parse(&out).is_ok());
    let fragments = c.json["verdicts"]["fragments"].as_array().unwrap();
    assert!(fragments.contains(&Value::from("BSR")));
}

#[test]
fn size_guard_is_a_resource_limit() {
    let dir = TempDir::new().unwrap();
    let phi2 = write(&dir, "phi2.fol", PHI2);
    let r = run(&["to-bsr", &phi2, "--size-guard", "1", "--json"]);
    assert_eq!(r.code, 3);
    assert!(r.json["verdicts"]["error"].as_str().unwrap().starts_with("resource limit"));
}

#[test]
fn unnesting_skolemizing_and_monadizing_the_first_example() {
    let dir = TempDir::new().unwrap();
    let phi1 = write(&dir, "phi1.fol", PHI1);

    let r = run(&["to-unnested", &phi1, "--json"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdicts"]["gaf"], true);
    let unnested = write(&dir, "flat.fol", r.json["verdicts"]["result"].as_str().unwrap());

    let r = run(&["check-shape", &unnested, "--json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["verdicts"]["shape_ok"], true);

    let r = run(&["skolemize", &unnested, "--json"]);
    assert_eq!(r.code, 0);
    assert!(!r.json["verdicts"]["skolem_symbols"].as_array().unwrap().is_empty());

    let r = run(&["to-monadic", &phi1, "--json", "--depth", "1"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let mon = std::fs::read_to_string(sibling(&phi1, "phi1.mon.fol")).unwrap();
    let f = parse(&mon).unwrap();
    assert!(f.predicates().iter().all(|(_, k)| *k == 1));
    let sizes = &r.json["verdicts"]["sizes"];
    let atoms = sizes["atoms"].as_u64().unwrap();
    assert!(sizes["closure"].as_u64().unwrap() <= atoms * atoms);
}

#[test]
fn check_shape_flags_a_binary_skolem_function() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "wide.fol", "forall X Z. exists Y. p(X, Z, Y)");
    let r = run(&["check-shape", &f, "--json"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdicts"]["shape_ok"], false);
    assert!(r.json["verdicts"]["wide_function"].is_object());
}

#[test]
fn check_equiv_reports_a_counterexample() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.fol", "forall X. p(X)");
    let b = write(&dir, "b.fol", "exists X. p(X)");
    let r = run(&["check-equiv", &a, &b, "--max-size", "2", "--json"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdicts"]["verdict"], "Counterexample");
    assert_eq!(r.json["verdicts"]["first_holds"], false);
    assert_eq!(r.json["verdicts"]["second_holds"], true);

    let c = write(&dir, "c.fol", "~(exists X. ~p(X))");
    let r = run(&["check-equiv", &a, &c, "--max-size", "3", "--json"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdicts"]["verdict"], "Equivalent");
}

#[test]
fn shrink_keeps_a_model_within_the_bound() {
    let dir = TempDir::new().unwrap();
    let text = "forall X. exists Y. (~q(X) | p(Y))";
    let f = write(&dir, "s.fol", text);
    let model = r#"{"universe_size": 5, "predicates": {"p": [[0],[1],[2],[3],[4]], "q": [[1],[3]]}}"#;
    let m = write(&dir, "big.model.json", model);
    let r = run(&["shrink", &m, &f, "--json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let size = r.json["verdicts"]["output_size"].as_u64().unwrap();
    assert!(size < 5);
    let written = std::fs::read_to_string(sibling(&f, "s.shrunk.model.json")).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&written).unwrap(), r.json["verdicts"]["structure"]);

    let sentence = parse(text).unwrap();
    let b = rebuild_structure(&written, &Signature::of(&sentence));
    assert!(holds(&b, &sentence).unwrap());
}

/// Rebuilds the shrunken structure with the core API only.
fn rebuild_structure(text: &str, sig: &Signature) -> fragments_core::model::FiniteStructure {
    let json: Value = serde_json::from_str(text).unwrap();
    let n = json["universe_size"].as_u64().unwrap() as usize;
    let mut a = fragments_core::model::FiniteStructure::new(sig.clone(), n);
    for (p, tuples) in json["predicates"].as_object().unwrap() {
        for t in tuples.as_array().unwrap() {
            let t: Vec<usize> = t.as_array().unwrap().iter().map(|e| e.as_u64().unwrap() as usize).collect();
            a.set(p, &t, true);
        }
    }
    a
}

#[test]
fn shrink_rejects_a_non_model() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.fol", "forall X. p(X)");
    let m = write(&dir, "m.json", r#"{"universe_size": 2, "predicates": {"p": [[0]]}}"#);
    let r = run(&["shrink", &m, &f, "--json"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdicts"]["shrunk"], false);
}

#[test]
fn interpolate_entailing_and_non_entailing_pairs() {
    let dir = TempDir::new().unwrap();
    let phi = write(&dir, "phi.fol", "exists Y. forall X. (r(Y) & (~r(X) | s(X)) & t(X))");
    let psi = write(&dir, "psi.fol", "exists Y. s(Y)");
    let r = run(&["interpolate", &phi, &psi, "--json"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = &r.json["verdicts"];
    assert_eq!(v["verification"]["phi_entails_chi"], true);
    assert_eq!(v["verification"]["chi_entails_psi"], true);
    assert_eq!(v["verification"]["polarity"], true);
    let chi = parse(v["interpolant"].as_str().unwrap()).unwrap();
    assert!(chi.predicates().iter().all(|(p, _)| p != "t"));

    let r = run(&["interpolate", &psi, &phi, "--json"]);
    assert_eq!(r.code, 1);
    assert!(r.json["verdicts"]["interpolant"].is_null());
}

#[test]
fn interpolate_reports_the_clause_cap() {
    let dir = TempDir::new().unwrap();
    let phi = write(&dir, "phi.fol", "(forall X. (~p(X) | q(X))) & (forall X. (~q(X) | r(X))) & (forall X. p(X))");
    let psi = write(&dir, "psi.fol", "forall X. r(X)");
    let r = run(&["interpolate", &phi, &psi, "--clause-cap", "2", "--json"]);
    assert_eq!(r.code, 3);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.fol", "p(X) & p(X, Y)");
    let r = run(&["classify", &bad, "--json"]);
    assert_eq!(r.code, 2);
    assert!(r.json["verdicts"]["error"].as_str().unwrap().contains("arity"));

    let free = write(&dir, "free.fol", "p(X)");
    assert_eq!(run(&["classify", &free]).code, 2);
    assert_eq!(run(&["classify", "/nonexistent/x.fol"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["classify"]).code, 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let phi2 = write(&dir, "phi2.fol", PHI2);
    for args in [
        vec!["classify", phi2.as_str(), "--json", "--no-timings"],
        vec!["to-bsr", phi2.as_str(), "--json", "--no-timings", "--trace"],
        vec!["to-monadic", phi2.as_str(), "--json", "--no-timings"],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.stdout, b.stdout);
        assert!(a.json["timings"].as_object().unwrap().is_empty());
    }
}

#[test]
fn text_output_by_default() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "u.fol", "exists X. (p(X) & ~p(X))");
    let r = run(&["decide", &f, "--no-timings"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("verdict: Unsat"));
    assert!(r.stdout.starts_with("command: decide"));
}
