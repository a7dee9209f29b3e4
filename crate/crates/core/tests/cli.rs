use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ofl::semantics::satisfied;
use ofl::{parse_term, Structure, Vocabulary};
use tempfile::TempDir;

fn ofl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ofl")).args(args).env_remove("OFL_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn contradiction_is_unsat() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "t", "vocab: R/2\nterm: ex ex (R cap not R)\n");
    let o = ofl(&["sat", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("UNSAT"));
}

#[test]
fn ordered_sat_writes_a_replayable_certificate() {
    let d = TempDir::new().unwrap();
    let src = "all ex (R cap not E (R cup not R))";
    let f = write(&d, "t", &format!("vocab: R/2\nterm: {src}\n"));
    let cert = d.path().join("model.json");
    let o = ofl(&["sat", "--solver", "ordered", "--certify", s(&cert), s(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = Vocabulary::parse("R/2").unwrap();
    let m = Structure::from_json(&fs::read_to_string(&cert).unwrap(), Some(&v)).unwrap();
    assert!(satisfied(&m, &parse_term(src, &v).unwrap()).unwrap());
    assert_eq!(ofl(&["certify", s(&f), s(&cert)]).status.code(), Some(0));
}

#[test]
fn certify_rejects_a_non_model() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "t", "vocab: P/1\nterm: ex P\n");
    let m = write(&d, "m", r#"{"domain": 2, "relations": {"P": []}}"#);
    let o = ofl(&["certify", s(&f), s(&m)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejected"));
}

#[test]
fn infinity_axiom_is_unknown_up_to_three() {
    let d = TempDir::new().unwrap();
    let o = ofl(&["translate", "infinity"]);
    assert_eq!(o.status.code(), Some(0));
    let f = write(&d, "inf", &stdout(&o));
    let o = ofl(&["sat", "--solver", "oracle", "--max-size", "3", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no model up to size 3"));
}

#[test]
fn classify_labels() {
    let d = TempDir::new().unwrap();
    let cases = [
        ("vocab: R/2\nterm: all ex (R cap not E R)\n", "PSPACE-complete"),
        ("vocab: R/2\nterm: ex ex (p R cap not R)\n", "undecidable (Π⁰₁)"),
        ("vocab: R/2, P/1\nterm: ex ex (s E R cap C(R, P))\n", "NEXPTIME-hard; decidability open"),
    ];
    for (i, (text, label)) in cases.iter().enumerate() {
        let f = write(&d, &format!("t{i}"), text);
        let o = ofl(&["classify", s(&f)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(&format!("status {label}")), "{}", stdout(&o));
    }
}

#[test]
fn json_output_is_versioned() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "t", "vocab: P/1\nterm: ex P\n");
    for cmd in ["parse", "classify", "sat", "nf"] {
        let o = ofl(&["--json", cmd, s(&f)]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["schema"], 1, "{cmd}");
    }
}

#[test]
fn eval_prints_tuples_and_truth() {
    let d = TempDir::new().unwrap();
    let st = write(&d, "s", r#"{"domain": 2, "relations": {"R": [[0, 1]]}}"#);
    let f = write(&d, "t", "vocab: R/2\nterm: s R\n");
    let o = ofl(&["eval", s(&f), s(&st)]);
    assert_eq!(stdout(&o), "arity 2 tuples 1\n1 0\n");
    let f = write(&d, "u", "vocab: R/2\nterm: ex ex R\n");
    assert_eq!(stdout(&ofl(&["eval", s(&f), s(&st)])), "true\n");
}

#[test]
fn errors_have_distinct_codes() {
    let d = TempDir::new().unwrap();
    assert_eq!(ofl(&["sat"]).status.code(), Some(3));
    assert_eq!(ofl(&["translate", "modal"]).status.code(), Some(3));
    let bad = write(&d, "bad", "vocab: R/2\nterm: ex (R cap\n");
    assert_eq!(ofl(&["parse", s(&bad)]).status.code(), Some(4));
    let open = write(&d, "open", "vocab: R/2\nterm: ex R\n");
    assert_eq!(ofl(&["sat", s(&open)]).status.code(), Some(4));
    let p = write(&d, "p", "vocab: R/2\nterm: ex ex p R\n");
    assert_eq!(ofl(&["sat", "--solver", "ordered", s(&p)]).status.code(), Some(4));
}

#[test]
fn translations_feed_the_solver() {
    let d = TempDir::new().unwrap();
    let modal = write(&d, "m", "and dia p1 box not p1\n");
    let o = ofl(&["translate", "modal", s(&modal)]);
    assert_eq!(o.status.code(), Some(0));
    let t = write(&d, "mt", &stdout(&o));
    assert_eq!(ofl(&["sat", s(&t)]).status.code(), Some(1));
    let ol = write(&d, "ol", "ex v1 (P(v1) & ex v2 R(v1,v2))\n");
    let o = ofl(&["translate", "ol", s(&ol)]);
    let t = write(&d, "olt", &stdout(&o));
    assert_eq!(ofl(&["sat", s(&t)]).status.code(), Some(0));
    let tiles = write(&d, "tiles", r#"[{"r":"a","l":"a","t":"b","b":"b"}]"#);
    let o = ofl(&["translate", "tiling", s(&tiles)]);
    let t = write(&d, "tt", &stdout(&o));
    assert_eq!(ofl(&["sat", "--solver", "oracle", "--max-size", "2", s(&t)]).status.code(), Some(0));
}

#[test]
fn fuzz_is_deterministic_and_seed_driven() {
    let a = ofl(&["fuzz", "--seed", "42", "--count", "20"]);
    let b = ofl(&["fuzz", "--seed", "42", "--count", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_ofl"))
        .args(["fuzz", "--count", "3", "--suite", "laws"])
        .env("OFL_SEED", "7")
        .output()
        .unwrap();
    assert!(stdout(&env).starts_with("seed 7\n"));
}

#[test]
fn trace_lists_guesses() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "t", "vocab: R/2\nterm: all ex (R cap not E (R cup not R))\n");
    let o = ofl(&["sat", "--trace", s(&f)]);
    assert!(stdout(&o).lines().next().unwrap().starts_with("guess "));
}
