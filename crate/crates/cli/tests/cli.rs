//! The binary end to end: exit statuses, output files and reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn tricx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricx")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tricx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SQUARE: &str = "tricx-module v1
field q
kind bicomplex
dim 0,0 1
dim 1,0 1
dim 0,1 1
dim 1,1 1
map d1 0,0 1x1
  1
map d2 0,0 1x1
  1
map d2 1,0 1x1
  1
map d1 0,1 1x1
  -1
end
";

#[test]
fn decompose_a_square() {
    let path = scratch("square.txt");
    std::fs::write(&path, SQUARE).unwrap();
    let basis = scratch("basis.txt");
    let out = tricx(&["decompose", path.to_str().unwrap(), "--out", basis.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("field: q"));
    assert!(text.contains("Square@(0,0)  ×1"), "{text}");
    assert!(std::fs::read_to_string(&basis).unwrap().starts_with("tricx-maps v1"));
}

#[test]
fn invalid_input_exits_with_2() {
    let path = scratch("broken.txt");
    std::fs::write(&path, SQUARE.replace("  -1", "  1")).unwrap();
    let out = tricx(&["decompose", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("(0,0)"), "{err}");
    assert_eq!(tricx(&["tot", "/nonexistent/file"]).status.code(), Some(2));
    let out = tricx(&["verify", "tl", "--window", "2:-2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "braid", "--trials", "3", "--seed", "9", "--window", "-1:1", "--max-dim", "2"];
    let a = tricx(&args);
    let b = tricx(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn a_corrupted_counit_exits_with_1() {
    let out = tricx(&["verify", "inverse", "--trials", "3", "--flip-out-sign", "d2w"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn braid_words_through_files() {
    let input = scratch("p.txt");
    let out = tricx(&["random", "zigzag-complex", "--seed", "4", "--window", "-1:1", "--out", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let fp = |word: &str, side: &str| {
        let out = tricx(&["braid", input.to_str().unwrap(), "--word", word, "--side", side]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        text.lines().find(|l| l.contains("sha256 ")).unwrap().to_string()
    };
    assert_eq!(fp("0,1,0", "tricomplex"), fp("1,0,1", "tricomplex"));
    assert_eq!(fp("-1,0,2", "tricomplex"), fp("-1,2,0", "tricomplex"));
    assert_eq!(fp("0,1,0", "complex"), fp("0,1,0", "tricomplex"));
    let out = tricx(&["braid", input.to_str().unwrap(), "--word", "-0", "--side", "complex"]);
    assert_eq!(out.status.code(), Some(2));
}
