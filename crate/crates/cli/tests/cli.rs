use std::path::PathBuf;
use std::process::{Command, Output};

use polynewt::corpus::CorpusEntry;
use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", &format!("{name}.json")].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polynewt")).args(args).output().expect("binary runs")
}

fn run_with_threads(args: &[&str], threads: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polynewt"))
        .args(args)
        .env("POLYNEWT_THREADS", threads.to_string())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    json(&out)
}

#[test]
fn newton_with_inline_cone() {
    let v = ok(&["newton", "--cone", r#"{"orthant":2,"ambient":2}"#, &corpus("tri_a2b2")]);
    assert_eq!(v, serde_json::json!({"nu": 1}));
}

#[test]
fn newton_uses_entry_cone() {
    assert_eq!(ok(&["newton", &corpus("square_cone")])["nu"], 8);
    assert_eq!(ok(&["ell-newton", &corpus("square_cone")])["ell_nu"], 7);
}

#[test]
fn lstar_of_the_thin_example() {
    assert_eq!(ok(&["lstar", &corpus("cayley_b2_thin")]), serde_json::json!({"coeffs": [0]}));
}

#[test]
fn polar_degree_of_binary_cubic() {
    let v = ok(&["degree", "polar", "--homog-degree", "3", &corpus("binary_full")]);
    assert_eq!(v["pdeg"], 2);
    assert_eq!(v["checks"], "all-equal");
}

#[test]
fn ehrhart_family() {
    let f = corpus("tri_a2b2");
    assert_eq!(ok(&["hstar", &f])["coeffs"], serde_json::json!([1, 3]));
    assert_eq!(ok(&["volume", &f])["volume"], 4);
    let e = ok(&["ehrhart", &f]);
    assert_eq!(e["coeffs"].as_array().unwrap().len(), 3);
    let h = ok(&["hull", &f]);
    assert_eq!(h["f_vector"], serde_json::json!([3, 3]));
}

#[test]
fn mixed_volume_with_counts() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("sq.json");
    std::fs::write(&sq, r#"{"dim":2,"points":[[0,0],[1,0],[0,1],[1,1]]}"#).unwrap();
    let arg = format!("{}:2", sq.display());
    assert_eq!(ok(&["mixed-volume", &arg])["mixed_volume"], 2);
}

#[test]
fn e_newton_at_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("seg.json");
    std::fs::write(&f, r#"{"dim":1,"points":[[0],[1],[2]]}"#).unwrap();
    let v = ok(&["e-newton", "--point", "0:1", f.to_str().unwrap()]);
    assert!(v["e_newton"].is_i64());
    assert!(ok(&["euler-obstructions", f.to_str().unwrap()])["faces"].is_array());
    assert!(ok(&["dual-defect", f.to_str().unwrap()])["dual_defective"].is_boolean());
}

#[test]
fn bk_certificate_for_the_thin_example() {
    let v = ok(&["bk", &corpus("cayley_b2_thin")]);
    assert_eq!(v["certificate"]["k"], 2);
    let n = ok(&["negligible", &corpus("cayley_b2_thin")]);
    assert_eq!(n["negligible"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "points": [[0, 0], [1, "x"]]}"#).unwrap();
    let out = run(&["volume", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("points[1][1]"), "{msg}");

    let mismatch = dir.path().join("mm.json");
    std::fs::write(&mismatch, r#"{"dim": 2, "points": [[0, 0], [1, 0, 0]]}"#).unwrap();
    assert_eq!(run(&["volume", mismatch.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(run(&["newton", &corpus("binary_full")]).status.code(), Some(2));
    assert_eq!(run(&["volume", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["corpus", "verify", "--only", "nope"]).status.code(), Some(2));
}

#[test]
fn injected_fault_names_inversion() {
    let out = run(&["corpus", "verify", "--seeds", "0..10", "--only", "obstruction-inversion", "--inject-fault", "c-number-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["checks"][0]["name"], "obstruction-inversion");
    assert!(!v["checks"][0]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn only_restricts_the_sweep() {
    let v = ok(&["corpus", "verify", "--seeds", "0..20", "--only", "bk-theorem"]);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "bk-theorem");
    assert_eq!(checks[0]["instances"], 20);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["corpus", "verify", "--seeds", "0..24", "--only", "bk-theorem,e-newton-bound,ell-newton"];
    let a = run_with_threads(&args, 1);
    let b = run_with_threads(&args, 4);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let again = run_with_threads(&args, 4);
    assert_eq!(b.stdout, again.stdout);
}

#[test]
fn corpus_entries_round_trip() {
    let ids: Vec<String> = serde_json::from_value(ok(&["corpus", "list"])).unwrap();
    assert!(ids.contains(&"twisted_thin".to_string()));
    let dir = tempfile::tempdir().unwrap();
    for id in ids {
        let shown = ok(&["corpus", "show", &id]);
        let f = dir.path().join(format!("{id}.json"));
        std::fs::write(&f, serde_json::to_string(&shown).unwrap()).unwrap();
        let original: CorpusEntry = serde_json::from_str(&std::fs::read_to_string(corpus(&id)).unwrap()).unwrap();
        let reparsed: CorpusEntry = serde_json::from_value(shown.clone()).unwrap();
        assert_eq!(reparsed, original, "{id}");
        assert_eq!(serde_json::to_value(&reparsed).unwrap(), shown, "{id}");
        assert_eq!(ok(&["volume", f.to_str().unwrap()]), ok(&["volume", &corpus(&id)]));
    }
}

#[test]
fn poset_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("b2.json");
    std::fs::write(
        &f,
        r#"{"elements": ["0", "a", "b", "1"],
            "covers": [["0","a"],["0","b"],["a","1"],["b","1"]],
            "rank": {"0": 0, "a": 1, "b": 1, "1": 2}}"#,
    )
    .unwrap();
    let p = f.to_str().unwrap();
    assert_eq!(ok(&["poset", "g", p])["coeffs"], serde_json::json!([1]));
    assert!(ok(&["poset", "h", p])["coeffs"].is_array());
}
