mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use common::*;
use zxw::cli::run;
use zxw::gallery::{all_entries, build_mixed_cnot};
use zxw::io::{from_json, to_json};
use zxw::random::{random_diagram, RandomConfig};
use zxw::{eval, Diagram, Endpoint, GeneratorKind};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn zxw(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["zxw"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, d: &Diagram) -> String {
    let p = dir.join(name);
    fs::write(&p, to_json(d)).unwrap();
    p.to_str().unwrap().to_string()
}

/// Entries printed by `eval` in text format, after the two header lines.
fn entries(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .skip(2)
        .map(|l| {
            let mut it = l.split_whitespace().map(|x| x.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn eval_identity() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "id.json", &Diagram::identity(&dims(&[3])));
    let o = zxw(&["eval", &p]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("out_dims: [3]\nin_dims: [3]\n"));
    let e = entries(&o.stdout);
    assert_eq!(e.len(), 9);
    for (k, (re, im)) in e.into_iter().enumerate() {
        assert_eq!((re, im), (if k % 4 == 0 { 1.0 } else { 0.0 }, 0.0));
    }
}

#[test]
fn eval_prints_seventeen_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let third = Diagram::node(GeneratorKind::Scalar(c(1.0 / 3.0, -2.0 / 7.0))).unwrap();
    let p = write(dir.path(), "s.json", &third);
    let o = zxw(&["eval", &p]);
    let line = o.stdout.lines().nth(2).unwrap();
    assert_eq!(line, format!("{:.16e} {:.16e}", 1.0 / 3.0, -2.0 / 7.0));
    let (re, im) = entries(&o.stdout)[0];
    assert_eq!((re, im), (1.0 / 3.0, -2.0 / 7.0));
}

#[test]
fn eval_cnot_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let entry = build_mixed_cnot(3).unwrap();
    let p = write(dir.path(), "cnot.json", &entry.diagram);
    let o = zxw(&["eval", &p]);
    assert_eq!(o.code, 0);
    let got = entries(&o.stdout);
    assert!(got.iter().zip(entry.oracle.data()).all(|(&(re, im), want)| re == want.re && im == want.im));
}

#[test]
fn eval_json_format_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "h.json", &node(GeneratorKind::Hadamard { dim: dim(2) }));
    let out = dir.path().join("t.json");
    let dot = dir.path().join("h.dot");
    let o = zxw(&["eval", &p, "--format", "json", "--output", out.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["out_dims"], serde_json::json!([2]));
    assert_eq!(v["data"][3], serde_json::json!([-1.0, 0.0]));
    assert!(fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn dangling_port_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let h = GeneratorKind::Hadamard { dim: dim(2) };
    let d = Diagram::from_parts(vec![h], vec![(Endpoint::Input(0), Endpoint::port(0, 0))], dims(&[2]), vec![]);
    let p = write(dir.path(), "bad.json", &d);
    let o = zxw(&["eval", &p]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("dangling"), "{}", o.stderr);
}

#[test]
fn parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    fs::write(&p, "{ not json").unwrap();
    assert_eq!(zxw(&["eval", p.to_str().unwrap()]).code, 2);
    fs::write(&p, r#"{"version":"1","inputs":[],"outputs":[],"nodes":[{"id":0,"kind":"v_box"}],"edges":[]}"#).unwrap();
    let o = zxw(&["normalize", p.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("v_box"));
    assert_eq!(zxw(&["eval", "/nonexistent/file.json"]).code, 2);
    assert_eq!(zxw(&["frobnicate"]).code, 2);
}

#[test]
fn equal_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = random_diagram(&mut rng(5), &RandomConfig::default());
    let (s, _) = zxw::rewrite::simplify(&d).unwrap();
    let (a, b) = (write(dir.path(), "a.json", &d), write(dir.path(), "b.json", &s));
    assert_eq!(zxw(&["equal", &a, &b]).code, 0);

    let bell = node(GeneratorKind::Cap { dim: dim(2) });
    let zero = node(GeneratorKind::XSpider { dim: dim(2), n_in: 0, n_out: 1 });
    let zz = Diagram::par_compose(&zero, &zero);
    let (a, b) = (write(dir.path(), "bell.json", &bell), write(dir.path(), "zz.json", &zz));
    let o = zxw(&["equal", &a, &b]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("first difference at index 3"), "{}", o.stdout);

    let a = write(dir.path(), "id2.json", &Diagram::identity(&dims(&[2])));
    let b = write(dir.path(), "id3.json", &Diagram::identity(&dims(&[3])));
    assert_eq!(zxw(&["equal", &a, &b]).code, 4);
}

#[test]
fn normalize_empty_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "empty.json", &Diagram::empty());
    let o = zxw(&["normalize", &p]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.trim(), "dims: (), coeffs: (1+0i)");
}

#[test]
fn simplify_writes_document_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cnot = build_mixed_cnot(3).unwrap().diagram;
    let p = write(dir.path(), "c3.json", &zxw::diagram::power(&cnot, 3).unwrap());
    let out = dir.path().join("s.json");
    let o = zxw(&["simplify", &p, "--output", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("rewrites") && o.stdout.contains("hopf-disconnect"));
    let s = from_json(&fs::read_to_string(out).unwrap()).unwrap();
    assert!(s.is_identity_wires());
    // without --output the document is on stdout and the trace on stderr
    let o = zxw(&["simplify", &p]);
    assert!(from_json(&o.stdout).unwrap().is_identity_wires());
    assert!(o.stderr.contains("fuse-z"));
}

#[test]
fn verify_rules_table() {
    let o = zxw(&["verify-rules", "--dims", "2,3,4", "--samples", "100", "--seed", "7"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    for rule in zxw::rewrite::RuleId::ALL {
        let line = o.stdout.lines().find(|l| l.starts_with(rule.name())).unwrap();
        assert!(line.ends_with("pass"), "{line}");
    }
    assert_eq!(o.stdout.matches("not mechanized").count(), 19);
    let again = zxw(&["verify-rules", "--dims", "2,3,4", "--samples", "100", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);
    let neg = zxw(&["verify-rules", "--dims", "2,3", "--samples", "20", "--negative-control"]);
    assert_eq!(neg.code, 0);
    assert!(neg.stdout.contains("rejected (expected)"));
    assert_eq!(zxw(&["verify-rules", "--dims", "2,0"]).code, 2);
}

#[test]
fn gallery_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cnot.json");
    let o = zxw(&["gallery", "cnot", "--d", "3", "--output", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("exact: pass"), "{}", o.stdout);
    let d = from_json(&fs::read_to_string(out).unwrap()).unwrap();
    assert!(d.structurally_eq(&build_mixed_cnot(3).unwrap().diagram));
    let o = zxw(&["gallery", "qft", "--n", "3"]);
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("up-to-scalar: pass"));
    let o = zxw(&["gallery", "teleport"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("qft, cnot, symmetrizer, triangle"));
}

#[test]
fn documents_round_trip() {
    for e in all_entries() {
        let back = from_json(&to_json(&e.diagram)).unwrap();
        assert!(back.structurally_eq(&e.diagram), "{}", e.name);
    }
    let mut r = rng(77);
    for _ in 0..100 {
        let d = random_diagram(&mut r, &RandomConfig::default());
        let back = from_json(&to_json(&d)).unwrap();
        assert!(back.structurally_eq(&d));
        assert_eq!(eval(&back).unwrap(), eval(&d).unwrap());
    }
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_zxw"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let id2 = write(dir.path(), "id2.json", &Diagram::identity(&dims(&[2])));
    let id3 = write(dir.path(), "id3.json", &Diagram::identity(&dims(&[3])));
    let h = write(dir.path(), "h.json", &node(GeneratorKind::Hadamard { dim: dim(2) }));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"version":"1","inputs":[2],"outputs":[],"nodes":[],"edges":[]}"#).unwrap();
    let code = |args: &[&str]| Command::new(binary()).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["equal", &id2, &id2]), 0);
    assert_eq!(code(&["equal", &id2, &h]), 1);
    assert_eq!(code(&["gallery", "nope"]), 2);
    assert_eq!(code(&["eval", bad.to_str().unwrap()]), 3);
    assert_eq!(code(&["equal", &id2, &id3]), 4);
}
