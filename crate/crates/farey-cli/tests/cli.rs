//! End-to-end tests of the `farey` binary.

use std::io::Write;
use std::process::{Command, Output};

fn farey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = farey(args);
    assert!(
        out.status.success(),
        "farey {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn dist_basics() {
    assert_eq!(stdout_of(&["dist", "0/1", "1/0"]).trim(), "1");
    assert_eq!(stdout_of(&["dist", "0/1", "0/1"]).trim(), "0");
    assert_eq!(stdout_of(&["dist", "0/1", "5/7"]).trim(), "3");
    assert_eq!(stdout_of(&["dist", "--oracle", "0/1", "5/7"]).trim(), "3");
}

#[test]
fn dist_json_round_trips() {
    let raw = stdout_of(&["--json", "dist", "0/1", "5/7"]);
    let v: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(v["distance"], 3);
    assert_eq!(v["method"], "fast");
    assert_eq!(v["stable"], true);
}

#[test]
fn path_endpoints_and_length_agree_with_dist() {
    let out = stdout_of(&["path", "0/1", "5/7"]);
    let verts: Vec<&str> = out.lines().collect();
    assert_eq!(verts.first(), Some(&"0/1"));
    assert_eq!(verts.last(), Some(&"5/7"));
    assert_eq!(verts.len(), 4);
}

#[test]
fn cover_push_and_pull() {
    assert_eq!(stdout_of(&["cover", "--matrix", "1,0,0,2", "push", "1/2"]).trim(), "1/1");
    assert_eq!(stdout_of(&["cover", "--matrix", "1,0,0,2", "pull", "1/1"]).trim(), "1/2");
    let audit = stdout_of(&["cover-audit", "--matrix", "1,0,0,2", "--entry-bound", "6"]);
    assert!(audit.contains("within_bound true"), "{}", audit);
}

#[test]
fn twist_and_reflect() {
    assert_eq!(stdout_of(&["twist", "--about", "1/0", "--power", "3", "0/1"]).trim(), "3/1");
    assert_eq!(stdout_of(&["reflect", "3/5"]).trim(), "-3/5");
}

#[test]
fn setops_union_and_diameter() {
    let a = write_temp("0/1\n1/1\n");
    let b = write_temp("1/0\n");
    let out = stdout_of(&[
        "setops",
        "union",
        a.path().to_str().unwrap(),
        b.path().to_str().unwrap(),
    ]);
    for slope in ["0/1", "1/1", "1/0"] {
        assert!(out.contains(slope), "union output missing {}: {}", slope, out);
    }
    let d = stdout_of(&["setops", "diameter", a.path().to_str().unwrap()]);
    assert_eq!(d.trim(), "1");
}

#[test]
fn setops_closure_derive_replays() {
    let out = stdout_of(&[
        "setops",
        "closure-derive",
        "--seed",
        "1/0",
        "--center",
        "0/1",
        "--radius",
        "2",
        "--entry-bound",
        "8",
    ]);
    assert!(out.contains("replay: ok"), "{}", out);
}

#[test]
fn mnh_command_finds_the_clasp_filling() {
    let grid = "1/0,0/1,1/1;1/0,0/1,1/1";
    let mut lines = String::new();
    for e0 in ["1/0", "0/1", "1/1", "inf"] {
        for e1 in ["1/0", "0/1", "1/1", "inf"] {
            let class = if e0 == "1/0" { "N" } else { "H" };
            lines.push_str(&format!("{},{} {}\n", e0, e1, class));
        }
    }
    let oracle = write_temp(&lines);
    let out = stdout_of(&["mnh", "--oracle", oracle.path().to_str().unwrap(), "--grid", grid]);
    assert_eq!(out.trim(), "1/0,inf");
}

const TREE_OK: &str = "\
txtree v1
node id=X0 class=hyperbolic level=0 tori=3 volume=5.33
node id=X2 class=jsj level=2 parent=X0 edge=mnh:1/0,inf,inf tori=2
node id=X3a class=hyperbolic level=3 parent=X2 edge=jsj volume=2.03
node id=X3b class=hyperbolic level=3 parent=X2 edge=jsj volume=2.03
";

#[test]
fn tree_validate_size_and_volume_chain() {
    let f = write_temp(TREE_OK);
    let path = f.path().to_str().unwrap();
    assert_eq!(stdout_of(&["tree", "validate", path]).trim(), "valid");
    assert_eq!(stdout_of(&["tree", "size", path]).trim(), "4");
    assert_eq!(stdout_of(&["tree", "volume-chain", path]).trim(), "valid");

    let bad = write_temp(&TREE_OK.replace("level=2", "level=1"));
    let out = farey(&["tree", "validate", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("level-congruence")
        || String::from_utf8_lossy(&out.stdout).contains("LevelCongruence")
        || String::from_utf8_lossy(&out.stdout).contains("level"));

    let growing = write_temp(&TREE_OK.replace("volume=2.03", "volume=9.9"));
    let out = farey(&["tree", "volume-chain", growing.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_is_deterministic_and_bounded() {
    let a = stdout_of(&["render-farey", "--depth", "3", "--highlight", "1/2"]);
    let b = stdout_of(&["render-farey", "--depth", "3", "--highlight", "1/2"]);
    assert_eq!(a, b);
    assert!(a.starts_with("<svg"));
    assert!(a.trim_end().ends_with("</svg>"));
    let out = farey(&["render-farey", "--depth", "11"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_input_is_a_clean_error() {
    let out = farey(&["dist", "0/0", "1/0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}
