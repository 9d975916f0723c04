use std::ffi::OsString;
use std::path::{Path, PathBuf};

use bsknap::cli::{run, EXIT_LIMIT, EXIT_OK, EXIT_PARSE};
use bsknap::instance::{format_instance, parse_instance};
use serde_json::Value;

fn instances() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv: Vec<OsString> = vec!["bsknap".into()];
    argv.extend(args.iter().map(OsString::from));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_instance(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("instance.txt");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn shipped_examples() {
    for (file, first) in [
        ("powers_of_a.txt", "SAT"),
        ("odd_target.txt", "UNSAT"),
        ("mixed.txt", "SAT"),
        ("empty.txt", "SAT"),
    ] {
        let path = instances().join(file);
        let (code, out, err) = invoke(&["solve", path.to_str().unwrap(), "--oracle-bound", "8"]);
        assert_eq!(code, EXIT_OK, "{file}: {err}");
        assert_eq!(out.lines().next(), Some(first), "{file}");
    }
}

#[test]
fn witness_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "q: 2\ngen: a\ntarget: a a a\n");
    let (code, out, _) = invoke(&[&path, "--witness"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().collect::<Vec<_>>()[..2], ["SAT", "x1 = 3"]);
    assert!(out.contains("h0: U = "));
}

#[test]
fn json_report_matches_golden() {
    let path = instances().join("powers_of_a.txt");
    let (code, out, _) = invoke(&[path.to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_OK);
    let (first, rest) = out.split_once('\n').unwrap();
    assert_eq!(first, "SAT");
    let mut got: Value = serde_json::from_str(rest).unwrap();
    assert!(got["wall_time_ms"].as_f64().unwrap() >= 0.0);
    got.as_object_mut().unwrap().remove("wall_time_ms");
    let golden: Value =
        serde_json::from_str(include_str!("fixtures/powers_of_a.golden.json")).unwrap();
    assert_eq!(got, golden);
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "gen: a\ntarget: a\n");
    let (code, _, err) = invoke(&[&path]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("q"), "{err}");

    let path = write_instance(&dir, "q: 2\ngen: a b\ntarget: a\n");
    let (code, _, err) = invoke(&[&path]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, _) = invoke(&["/nonexistent/instance.txt"]);
    assert_eq!(code, EXIT_PARSE);
}

#[test]
fn track_limit_exit_code() {
    let path = instances().join("mixed.txt");
    let (code, out, err) = invoke(&[path.to_str().unwrap(), "--track-limit", "3"]);
    assert_eq!(code, EXIT_LIMIT, "{out}{err}");
}

#[test]
fn dot_files_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let path = instances().join("powers_of_a.txt");
    let dots = dir.path().join("dot");
    let (code, out, _) = invoke(&[
        path.to_str().unwrap(),
        "--stats",
        "--emit-dot",
        dots.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("stage   0"));
    let files: Vec<_> = std::fs::read_dir(&dots).unwrap().collect();
    assert!(!files.is_empty());
    let first = std::fs::read_to_string(files[0].as_ref().unwrap().path()).unwrap();
    assert!(first.starts_with("digraph"));
}

#[test]
fn instance_files_round_trip() {
    for file in [
        "powers_of_a.txt",
        "odd_target.txt",
        "mixed.txt",
        "empty.txt",
    ] {
        let inst =
            parse_instance(&std::fs::read_to_string(instances().join(file)).unwrap()).unwrap();
        assert_eq!(
            parse_instance(&format_instance(&inst)).unwrap(),
            inst,
            "{file}"
        );
    }
}
