use std::path::{Path, PathBuf};
use std::process::Command;

use fo_csp::parse_structure;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn focsp(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_focsp")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn generated(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let run = focsp(args);
    assert_eq!(run.code, 0, "{}", run.stderr);
    write(dir, name, &run.stdout)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const K2: &str = "signature E/2\nuniverse 2\nrel E\n0 1\n1 0\nend\n";
const LOOP: &str = "signature E/2\nuniverse 1\nrel E\n0 0\nend\n";

#[test]
fn core_fo_verdicts() {
    let dir = TempDir::new().unwrap();
    let t3 = generated(&dir, "t3", &["gen", "tn", "3"]);
    let p3 = generated(&dir, "p3", &["gen", "path", "3"]);
    let yes = focsp(&["check-core-fo", s(&t3)]);
    assert_eq!((yes.code, yes.stdout.lines().next()), (0, Some("yes")));
    let no = focsp(&["check-core-fo", s(&p3)]);
    assert_eq!(no.code, 1);
    assert_eq!(no.stdout.lines().collect::<Vec<_>>(), ["no", "square-not-dismantlable"]);

    let extra = write(&dir, "extra", "signature E/2\nuniverse 4\nrel E\n0 1\n0 2\n1 2\nend\n");
    let nc = focsp(&["check-core-fo", s(&extra)]);
    assert_eq!((nc.code, nc.stdout.lines().next()), (1, Some("not-core")));
}

#[test]
fn solve_outputs() {
    let dir = TempDir::new().unwrap();
    let t3 = generated(&dir, "t3", &["gen", "tn", "3"]);
    let p3 = generated(&dir, "p3", &["gen", "path", "3"]);
    let no = focsp(&["solve", s(&p3), s(&t3)]);
    assert_eq!(no.code, 1);
    let lines: Vec<&str> = no.stdout.lines().collect();
    assert_eq!(lines[0], "no");
    assert!(["not-a-graph", "bad-graph"].contains(&lines[1]));

    let p2 = generated(&dir, "p2", &["gen", "path", "2"]);
    let yes = focsp(&["solve", s(&p2), s(&t3)]);
    assert_eq!(yes.code, 0);
    assert_eq!(yes.stdout, "yes\n0 -> 0\n1 -> 1\n2 -> 2\n");

    let bad = focsp(&["solve", s(&p2), s(&p3)]);
    assert_eq!(bad.code, 2);
}

#[test]
fn tree_duality_and_structured_output() {
    let dir = TempDir::new().unwrap();
    let k2 = write(&dir, "k2", K2);
    let lp = write(&dir, "loop", LOOP);
    let run = focsp(&["tree-duality", s(&k2), "--format", "structured"]);
    assert_eq!(run.code, 1);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["verdict"], "no");
    assert!(v["detail"].as_str().unwrap().contains("loop"));
    for key in ["verdict", "detail", "trace", "mapping"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let text = focsp(&["tree-duality", s(&k2)]);
    assert_eq!(text.stdout.lines().next(), Some("no"));
    assert_eq!(focsp(&["tree-duality", s(&lp)]).code, 0);
}

#[test]
fn dismantle_trace_lines() {
    let dir = TempDir::new().unwrap();
    let p3 = generated(&dir, "p3", &["gen", "path", "3"]);
    let sq = generated(&dir, "sq", &["construct", "power", s(&p3), "2"]);
    let run = focsp(&["dismantle", s(&sq), "--frozen", "0 5 10 15", "--trace"]);
    assert_eq!(run.code, 0);
    assert_eq!(
        run.stdout,
        "kept 0 1 2 4 5 6 7 8 9 10 11 13 14 15\nremove 3 by 0\nremove 12 by 0\n"
    );
}

#[test]
fn limits_and_errors() {
    let dir = TempDir::new().unwrap();
    let t3 = generated(&dir, "t3", &["gen", "tn", "3"]);
    let run = focsp(&["check-core-fo", s(&t3), "--cap", "4"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.stdout.lines().next(), Some("resource-limit"));

    let run = focsp(&["count", s(&t3), s(&t3), "--budget", "1"]);
    assert_eq!((run.code, run.stdout.lines().next()), (2, Some("resource-limit")));

    assert_eq!(focsp(&["check-core-fo", s(&t3), "--bogus"]).code, 2);
    assert_eq!(focsp(&["frobnicate"]).code, 2);

    let broken = write(&dir, "broken", "signature E/2\nuniverse 2\nrel E\n0 5\nend\n");
    let run = focsp(&["check-core-fo", s(&broken)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains(":4:"), "{}", run.stderr);
    assert_eq!(run.stderr.lines().count(), 1);
}

#[test]
fn generation_is_seeded() {
    let a = focsp(&["gen", "random", "E/2 U/1", "6", "0.3", "0.5", "--seed", "9"]);
    let b = focsp(&["gen", "random", "E/2 U/1", "6", "0.3", "0.5", "--seed", "9"]);
    let c = focsp(&["gen", "random", "E/2 U/1", "6", "0.3", "0.5", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let sat = focsp(&["gen", "sat", "--vars", "3", "--clauses", "4", "--seed", "2"]);
    assert_eq!(parse_structure(&sat.stdout).unwrap().size(), 12);
}

#[test]
fn constructions_parse_back() {
    let dir = TempDir::new().unwrap();
    let t3 = generated(&dir, "t3", &["gen", "tn", "3"]);
    let k2 = write(&dir, "k2", K2);
    let cases: [(&[&str], usize); 6] = [
        (&["construct", "product", s(&t3), s(&t3), "--annotate"], 9),
        (&["construct", "tolerant", s(&t3), "2", "--annotate"], 9),
        (&["construct", "quotient", s(&t3), "0 1 | 2"], 2),
        (&["construct", "exp", s(&k2), s(&k2)], 4),
        (&["construct", "setstruct", s(&k2), "--annotate"], 3),
        (&["construct", "linkprod", s(&t3), "2", "--annotate"], 15),
    ];
    for (args, size) in cases {
        let run = focsp(args);
        assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
        assert_eq!(parse_structure(&run.stdout).unwrap().size(), size, "{args:?}");
    }
    let tol = parse_structure(&focsp(&["construct", "tolerant", s(&t3), "2"]).stdout).unwrap();
    assert_eq!(tol.tuple_count(), 45);
}

#[test]
fn ppdef_and_biredundancy() {
    let dir = TempDir::new().unwrap();
    let t3 = generated(&dir, "t3", &["gen", "tn", "3"]);
    let arc = generated(&dir, "arc", &["gen", "path", "1"]);
    let run = focsp(&["construct", "ppdef", s(&arc), "0 0", s(&t3)]);
    let rel = write(&dir, "rel", &run.stdout);
    let rel_struct = parse_structure(&run.stdout).unwrap();
    assert_eq!(rel_struct.relation(0).iter().collect::<Vec<_>>(), [[0, 0], [1, 1]]);
    let b = focsp(&["biredundant", s(&rel)]);
    assert_eq!((b.code, b.stdout.lines().next()), (0, Some("yes")));
    assert_eq!(focsp(&["biredundant", s(&t3)]).code, 1);
}

#[test]
fn hom_count_and_core() {
    let dir = TempDir::new().unwrap();
    let t3 = generated(&dir, "t3", &["gen", "tn", "3"]);
    let p2 = generated(&dir, "p2", &["gen", "path", "2"]);
    let p1 = generated(&dir, "p1", &["gen", "path", "1"]);
    assert_eq!(focsp(&["count", s(&p1), s(&t3)]).stdout, "3\n");
    assert_eq!(focsp(&["count", s(&p2), s(&t3)]).stdout, "1\n");
    let hom = focsp(&["hom", s(&p2), s(&t3), "--no-prune"]);
    assert_eq!(hom.stdout, "yes\n0 -> 0\n1 -> 1\n2 -> 2\n");
    let core = focsp(&["core", s(&p2)]);
    assert_eq!(parse_structure(&core.stdout).unwrap().size(), 3);
    let lp = write(&dir, "loop", LOOP);
    let run = focsp(&["check-fo", s(&lp)]);
    assert_eq!(run.code, 0);
}

#[test]
fn consistency_witness() {
    let dir = TempDir::new().unwrap();
    let t3 = generated(&dir, "t3", &["gen", "tn", "3"]);
    let p3 = generated(&dir, "p3", &["gen", "path", "3"]);
    let run = focsp(&["consistency", s(&p3), s(&t3), "--witness"]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("failure tree:"));
    let ok = focsp(&["consistency", s(&t3), s(&t3)]);
    assert_eq!(ok.stdout, "yes\n0: {0}\n1: {1}\n2: {2}\n");
}
