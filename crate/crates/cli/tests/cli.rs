use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const PATH_GRAPH: &str = "v a\nv b\nv c\ne a b 2\ne b c 3\n";

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn sole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sole")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_script(graph: &Path, decomp: Option<&Path>, engine: &str, script: &str) -> Output {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "ops", script);
    let mut args = vec!["run", "--engine", engine, "--graph", graph.to_str().unwrap()];
    if let Some(d) = decomp {
        args.extend(["--decomp", d.to_str().unwrap()]);
    }
    args.extend(["--script", s.to_str().unwrap()]);
    sole(&args)
}

#[test]
fn path_script_on_every_engine() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "path", PATH_GRAPH);
    let c = write(&dir, "path.decomp", "cnode p\ncnode q\ncnode r\ncnode s\ncedge p q a\ncedge q r b\ncedge r s c\n");
    let script = "add a f1 10 4\nsum b\nsum c\ntop b 2\n";
    let want = "sum b = 10\nsum c = EMPTY\ntop b = f1:10\n";
    for engine in ["tree", "oracle"] {
        let o = run_script(&g, None, engine, script);
        assert!(o.status.success(), "{engine}: {o:?}");
        assert_eq!(stdout(&o), want, "{engine}");
    }
    let o = run_script(&g, Some(&c), "graph", script);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o), want);
}

#[test]
fn example_scripts() {
    let o = run_script(&fixture("tree12.graph"), None, "tree", "add v11 f 10 8\nsum v6 8\ntop v6 1 8\nsum v6 6\n");
    assert_eq!(stdout(&o), "sum v6 = 10\ntop v6 = f:10\nsum v6 = EMPTY\n");
    let o = run_script(
        &fixture("sp8.graph"),
        Some(&fixture("sp8.decomp")),
        "graph",
        "add v6 f 10 5\nsum v4 0\nremove v6 f\nsum v4 0\n",
    );
    assert_eq!(stdout(&o), "sum v4 = 10\nsum v4 = EMPTY\n");
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "path", PATH_GRAPH);
    let o = run_script(&g, None, "tree", "sum a\nsum zz\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = run_script(&g, None, "tree", "add a f 1 1\nadd b f 1 1\n");
    assert_eq!(o.status.code(), Some(1));
    let o = run_script(&g, None, "graph", "sum a\n");
    assert_eq!(o.status.code(), Some(1));
    let cyc = write(&dir, "cyc", "v a\nv b\nv c\ne a b 1\ne b c 1\ne c a 1\n");
    let o = run_script(&cyc, None, "tree", "sum a\n");
    assert_eq!(o.status.code(), Some(1));
    let bad = write(&dir, "bad", "v a\ne a q 1\n");
    let o = run_script(&bad, None, "oracle", "");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn selfcheck_passes_and_catches_faults() {
    let g = fixture("sp8.graph");
    let c = fixture("sp8.decomp");
    let args = ["selfcheck", "--graph", g.to_str().unwrap(), "--decomp", c.to_str().unwrap()];
    let o = sole(&[&args[..], &["--ops", "1000", "--seed", "5"]].concat());
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).starts_with("selfcheck PASS"));

    let o = sole(&[&args[..], &["--strategy", "boxes"]].concat());
    assert!(o.status.success(), "{o:?}");

    let o = sole(&[&args[..], &["--inject-fault"]].concat());
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("selfcheck FAIL") && out.contains("transcript:"), "{out}");

    let o = sole(&[&args[..], &["--ops", "0"]].concat());
    assert!(o.status.success());

    let dir = TempDir::new().unwrap();
    let t = write(&dir, "path", PATH_GRAPH);
    let o = sole(&["selfcheck", "--graph", t.to_str().unwrap(), "--engine", "graph"]);
    assert!(o.status.success(), "{o:?}");
}

#[test]
fn bench_is_deterministic() {
    let args = ["bench", "--sizes", "64,128", "--ops", "50", "--seed", "3"];
    let (a, b) = (sole(&args), sole(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("growth sum"));

    let o = sole(&["bench", "--engine", "graph", "--sizes", "64", "--op", "sum", "--ops", "20"]);
    let rows: Vec<_> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    assert_eq!(rows.len(), 1, "{rows:?}");
}

#[test]
fn output_is_identical_across_runs() {
    let g = fixture("sp8.graph");
    let c = fixture("sp8.decomp");
    let script = "add v1 a 3 4\nadd v3 b 5 2\nadd v8 c 7 1\ntop v2 3 2\nsum v5 3\nremove v3 b\ntop v4 2 5\n";
    let x = run_script(&g, Some(&c), "graph", script);
    let y = run_script(&g, Some(&c), "graph", script);
    let z = run_script(&g, None, "oracle", script);
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
    assert_eq!(x.stdout, z.stdout);
}
