use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use symlen_core::parse::parse_tower;

fn symlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const CYCLIC_SCENARIO: &str = r#"
p = 2
[hypothesis]
hypothesis = "split_by_cyclic_p"
[data]
tower = "GF(2)(t) ; AS i: i^2+i = 1"
algebra = "[1, t)_2"
"#;

#[test]
fn splits_reports_invariant() {
    let o = symlen(&["splits", "[1, t)_2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "nonsplit: invariant 1/2 at (t)");
    let o = symlen(&["splits", "[t, t)_2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("split:"));
}

#[test]
fn unknown_exits_two() {
    let o = symlen(&[
        "splits",
        "[t1, t2)_2",
        "--tower",
        "GF(2)(t1,t2)",
        "--bound",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("unknown"));
}

#[test]
fn bound_two_extension() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "s.toml",
        "p = 2\n[hypothesis]\nhypothesis = \"split_by_p_extension\"\nn = 3\n",
    );
    let o = symlen(&["bound", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("4 via two-extension-split"));
    let o = symlen(&["bound", &f, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"], 4);
}

#[test]
fn decompose_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.toml", CYCLIC_SCENARIO);
    let cert = dir.path().join("c.json");
    let o = symlen(&["decompose", &s, "--certificate", cert.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("certificate: accepted"));
    let o = symlen(&["verify", cert.to_str().unwrap()]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "accepted"));

    let mut c: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let last = c["steps"].as_array().unwrap().len() - 1;
    let after = c["steps"][last]["after"]
        .as_str()
        .unwrap()
        .replacen('[', "[t+", 1);
    c["steps"][last]["after"] = after.into();
    let bad = write(dir.path(), "bad.json", &c.to_string());
    let o = symlen(&["verify", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rejected"));
}

#[test]
fn decompose_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.toml", CYCLIC_SCENARIO);
    let o = symlen(&["decompose", &s, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let expr = v["decomposition"]["expr"].as_str().unwrap();
    let t = parse_tower("GF(2)(t)").unwrap();
    let e = t.parse_brauer(expr, Some(0)).unwrap();
    assert_eq!(t.expr_to_string(&e), expr);
    assert!(v["decomposition"]["length"].as_u64().unwrap() <= 3);
}

#[test]
fn frobenius_output_reparses() {
    let tower = "GF(2)(t) ; ROOT s: s^2 = t";
    let o = symlen(&["frobenius", "[s, t+s)_2", "--down", "0", "--tower", tower]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o).trim().to_string();
    assert_eq!(text, "[t, t^2+t)_2");
    let t = parse_tower(tower).unwrap();
    assert_eq!(
        t.expr_to_string(&t.parse_brauer(&text, Some(0)).unwrap()),
        text
    );
}

#[test]
fn invariants_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "e.txt",
        "tower: GF(3)(t)\n# two symbols\n[1, t)_3 ⊗ [t, t+1)_3\n",
    );
    let o = symlen(&["invariants", &f]);
    assert_eq!(
        (o.status.code(), stdout(&o).trim()),
        (Some(0), "{(t): 1/3, (t+1): 2/3}")
    );
    let f = write(dir.path(), "z.txt", "[1, 1/(t-t))_2\n");
    let o = symlen(&["invariants", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero denominator"));
}

#[test]
fn experiment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "x.toml",
        "seed = 5\ntrials = 6\np = 2\nscenario = \"split_by_cyclic_p\"\n",
    );
    let a = symlen(&["experiment", &f]);
    let b = symlen(&["experiment", &f]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(csv.starts_with("trial,scenario,bound_rule,bound,achieved,certified,runtime_ms"));
    assert_eq!(csv.lines().count(), 7);
    let out = dir.path().join("out");
    let o = symlen(&["experiment", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(out.join("experiment.csv"))
            .unwrap()
            .trim_end(),
        csv.trim_end()
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["trials"], 6);
    let missing_seed = write(
        dir.path(),
        "y.toml",
        "trials = 1\np = 2\nscenario = \"index\"\n",
    );
    assert_eq!(
        symlen(&["experiment", &missing_seed]).status.code(),
        Some(1)
    );
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "s.toml",
        "p = 4\n[hypothesis]\nhypothesis = \"index\"\nn = 1\n",
    );
    assert_eq!(symlen(&["bound", &f]).status.code(), Some(1));
    assert_eq!(
        symlen(&["verify", "/nonexistent.json"]).status.code(),
        Some(1)
    );
    assert_eq!(
        symlen(&["splits", "[1, t)_2", "--tower", "GF(6)(t)"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn help_documents_grammar() {
    let o = symlen(&["--help"]);
    let h = stdout(&o);
    assert!(h.contains("expr   := term (('+' | '-') term)*"));
    assert!(h.contains("GF(2)(t) ; AS i: i^2+i = 1/t ; ROOT s: s^2 = t"));
    assert!(h.contains("2 unknown"));
}
