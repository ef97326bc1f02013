use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn plausikit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plausikit")).args(args).env_remove("PLAUSIKIT_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    let out = plausikit(&["corpus", "--export", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    dir
}

fn file(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn check_prints_verdict_and_sets_exit_code() {
    let dir = corpus_dir();
    let out = plausikit(&["check", &file(dir.path(), "thm15L.json"), "w", "Bplus[a] p"]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(0), "true\n"));
    let out = plausikit(&["check", &file(dir.path(), "thm15R.json"), "W", "Bplus[a] p"]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(1), "false\n"));
}

#[test]
fn validity() {
    let dir = corpus_dir();
    let m = file(dir.path(), "thm15L.json");
    let out = plausikit(&["validity", &m, "p | ~p"]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(0), "valid\n"));
    let out = plausikit(&["validity", &m, "p"]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(1), "not valid: fails at v\n"));
}

#[test]
fn greatest_relation_omits_distinguished_pair() {
    let dir = corpus_dir();
    let (l, r) = (file(dir.path(), "thm15L.json"), file(dir.path(), "thm15R.json"));
    let out = plausikit(&["bisim", &l, &r, "--fragment", "K,Bplus", "--greatest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).lines().any(|x| x == "w W"));
    let out = plausikit(&["bisim", &l, &r, "--fragment", "K,Bc", "--greatest"]);
    assert_eq!(stdout(&out), "v V\nw W\n");
}

#[test]
fn relation_check() {
    let dir = corpus_dir();
    let d = dir.path();
    let args = |frag: &'static str| {
        vec![
            "bisim".to_string(),
            file(d, "thm21L.json"),
            file(d, "thm21R.json"),
            "--fragment".into(),
            frag.into(),
            "--relation".into(),
            file(d, "thm21Z.json"),
        ]
    };
    let run = |frag| plausikit(&args(frag).iter().map(String::as_str).collect::<Vec<_>>());
    let out = run("K,Bplus,Bc");
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(0), "bisimulation\n"));
    let out = run("Gt");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout(&out),
        "not a bisimulation: Gt zig clause fails at (w, V) for agent a: v has no related counterpart\n"
    );
}

#[test]
fn equivalence_reports_a_distinguishing_formula() {
    let dir = corpus_dir();
    let (l, r) = (file(dir.path(), "thm21L.json"), file(dir.path(), "thm21R.json"));
    let out = plausikit(&["equiv", &l, "w", &r, "W", "--fragment", "K,Bplus,Bc"]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(0), "equivalent\n"));
    let out = plausikit(&["equiv", &l, "w", &r, "W", "--fragment", "Gt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("distinguished by "));
}

#[test]
fn dynamic_fragments_are_reduced_with_a_notice() {
    let dir = corpus_dir();
    let (l, r) = (file(dir.path(), "thm15L.json"), file(dir.path(), "thm15R.json"));
    let out = plausikit(&["equiv", &l, "w", &r, "W", "--fragment", "K,Ann"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("using its reduction {K}"));
}

#[test]
fn rewrite_and_translate() {
    let out = plausikit(&["rewrite", "[! p] K[a] q"]);
    assert_eq!(stdout(&out), "p -> K[a](p -> q)\n");
    let out = plausikit(&["rewrite", "[! p] K[a] q", "--trace"]);
    assert_eq!(
        stdout(&out),
        "p -> K[a](p -> q)\n\
         1. ann-K at []: [! p] K[a] q  =>  p -> K[a] [! p] q\n\
         2. ann-base at [1,0]: [! p] q  =>  p -> q\n"
    );
    let out = plausikit(&["translate", "gt", "B[a | p] q"]);
    assert_eq!(stdout(&out), "K[a]((p & ~GtDia[a] p) -> q)\n");
    let out = plausikit(&["translate", "safe", "Gt[a] p"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_writes_sorted_json() {
    let dir = corpus_dir();
    let out_path = file(dir.path(), "announced.json");
    let out = plausikit(&["transform", &file(dir.path(), "thm15L.json"), "announce", "p", "-o", &out_path]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&out_path).unwrap();
    let printed = plausikit(&["transform", &file(dir.path(), "thm15L.json"), "announce", "p"]);
    assert_eq!(stdout(&printed), text);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["states"], serde_json::json!(["w"]));
    let out = plausikit(&["transform", &file(dir.path(), "thm15L.json"), "announce", "false"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn props_report() {
    let dir = corpus_dir();
    let out = plausikit(&["props", &file(dir.path(), "thm15R.json")]);
    assert_eq!(stdout(&out), "valid: yes\nuniform: yes\nlocally-connected: yes\nimage-finite: yes\n");
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"states":["w"],"agents":["a"],"epist":{"a":[]},"plaus":{"a":{"w":[["w","w"]]}},"valuation":{}}"#,
    )
    .unwrap();
    let out = plausikit(&["props", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("valid: no\n"));
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"states":[3,5],"agents":2,"atoms":2,"uniform":true,"seed":11}"#).unwrap();
    let outputs: Vec<PathBuf> = (0..2).map(|k| dir.path().join(format!("m{k}.json"))).collect();
    for o in &outputs {
        let out = plausikit(&["gen", spec.to_str().unwrap(), "-o", o.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&outputs[0]).unwrap(), fs::read(&outputs[1]).unwrap());
    let out = plausikit(&["props", outputs[0].to_str().unwrap()]);
    assert!(stdout(&out).contains("uniform: yes\n"));
    fs::write(&spec, r#"{"states":[3,5],"agents":2,"atoms":2,"colour":1}"#).unwrap();
    let out = plausikit(&["gen", spec.to_str().unwrap(), "-o", outputs[0].to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_2() {
    let dir = corpus_dir();
    let m = file(dir.path(), "thm15L.json");
    assert_eq!(plausikit(&["check", &m, "nowhere", "p"]).status.code(), Some(2));
    assert_eq!(plausikit(&["check", &m, "w", "p &"]).status.code(), Some(2));
    assert_eq!(plausikit(&["check", &file(dir.path(), "missing.json"), "w", "p"]).status.code(), Some(2));
    assert_eq!(plausikit(&["suite", "thm99"]).status.code(), Some(2));
    assert_eq!(plausikit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn resource_cap_exits_3() {
    let dir = corpus_dir();
    let (l, r) = (file(dir.path(), "thm14L.json"), file(dir.path(), "thm14R.json"));
    let out = plausikit(&["equiv", &l, "w", &r, "W", "--fragment", "K,Bc", "--cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn suites_run_and_honour_the_seed_variable() {
    let out = plausikit(&["suite", "thm9-K", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("thm9-K: 5 trials, "));
    let out = Command::new(env!("CARGO_BIN_EXE_plausikit"))
        .args(["suite", "thm18", "--trials", "3", "--json"])
        .env("PLAUSIKIT_SEED", "42")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((report["seed"].as_u64(), report["trials"].as_u64()), (Some(42), Some(3)));
    assert_eq!(report["failures"], serde_json::json!([]));
}

#[test]
fn corpus_listing_and_verification() {
    let out = plausikit(&["corpus", "--list"]);
    let names: Vec<String> =
        stdout(&out).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(&names[..3], ["thm14", "thm15", "thm21"]);
    let out = plausikit(&["corpus", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().all(|l| l.starts_with("ok   ")));
}
