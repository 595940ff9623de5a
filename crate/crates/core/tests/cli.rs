use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlrewrite")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rewrite_then_answer() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    let trace = dir.path().join("trace.jsonl");
    let o = run(&["rewrite", "--tbox", s(&fixture("university.tbox")), "--trace", s(&trace), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("status: terminated"));
    for f in ["horn.dl", "xi.dl", "meta.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let events = std::fs::read_to_string(&trace).unwrap();
    assert!(events.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
    assert!(events.lines().any(|l| l.contains("\"rule\":\"BR\"")));

    let q = write(dir.path(), "q", "UndergradCo(?y)\n");
    let o = run(&["answer", "--bundle", s(&out), "--abox", s(&fixture("university.abox")), "--query", &q]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "?y=b\n");
}

#[test]
fn answer_on_inconsistent_abox_warns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    run(&["rewrite", "--tbox", s(&fixture("university.tbox")), "--out", s(&out)]);
    let a = write(dir.path(), "a", "Undergrad(a)\ntakes(a,b)\nPHDco(b)\n");
    let q = write(dir.path(), "q", "Grad(?x)");
    let o = run(&["answer", "--bundle", s(&out), "--abox", &a, "--query", &q]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("inconsistent"));
    assert!(stdout(&o).contains("?x=a") && stdout(&o).contains("?x=b"));
}

#[test]
fn budget_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    let o = run(&["rewrite", "--tbox", s(&fixture("parity.tbox")), "--budget-clauses", "100", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("budget_exhausted"));
    assert!(out.join("horn.dl").exists());
}

#[test]
fn oracle_check_reports_clean() {
    let o = run(&["oracle-check", "--tbox", s(&fixture("university.tbox")), "--abox", s(&fixture("university.abox"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("ok\n"));
    let dir = tempfile::tempdir().unwrap();
    let q = write(dir.path(), "q", "takes(?x,?y), UndergradCo(?y)");
    let o = run(&[
        "oracle-check",
        "--tbox",
        s(&fixture("university.tbox")),
        "--abox",
        s(&fixture("university.abox")),
        "--query",
        &q,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn answer_diff_exits_three() {
    // an odd cycle makes G hold everywhere; a compilation cut short by a
    // tiny budget only knows the short cycles
    let dir = tempfile::tempdir().unwrap();
    let edges: String = (0..21).map(|i| format!("E(v{i},v{})\n", (i + 1) % 21)).collect();
    let a = write(dir.path(), "a", &edges);
    let tbox = fixture("parity.tbox");
    let o = run(&["oracle-check", "--tbox", s(&tbox), "--abox", &a, "--budget-clauses", "50"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("missing: G(v0)"));
    assert!(stdout(&o).ends_with("DIFF\n"));
}

#[test]
fn eval_prints_least_model() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a", "E(u,w)\nE(w,u)\nE(w,w)\n");
    let o = run(&["eval", "--program", s(&fixture("parity_rewriting.dl")), "--abox", &a]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("G(u)") && text.contains("G(w)"), "{text}");
}

#[test]
fn usage_and_parse_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["rewrite", "--out", "x"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let t = write(dir.path(), "t", "SubClassOf(A, Or(B, C)\n");
    let o = run(&["rewrite", "--tbox", &t, "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
