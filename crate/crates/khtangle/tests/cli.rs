//! End-to-end checks of the `kht` binary: subcommand output, exit codes, and
//! byte-identical reports across repeated runs.

use std::process::{Command, Output};

fn kht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kht"))
        .args(args)
        .output()
        .expect("failed to run kht")
}

#[test]
fn matchings_lists_catalan_many() {
    let out = kht(&["matchings", "--n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("5 matchings of 6 points"), "{text}");
}

#[test]
fn homology_of_unknot_fixture() {
    let out = kht(&["homology", "unknot0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("q= -1: Z"), "{text}");
    assert!(text.contains("q=  1: Z"), "{text}");
}

#[test]
fn homology_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unknot.tgl");
    std::fs::write(&path, "left 0\nright 0\ncomponent u\n").unwrap();
    let out = kht(&["homology", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("q= -1: Z"), "{text}");
}

#[test]
fn fixtures_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = kht(&["fixtures", "--export", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    // A named fixture resolved through --fixtures must agree with the
    // built-in one.
    let a = kht(&["--fixtures", dir.path().to_str().unwrap(), "homology", "trefoil-right"]);
    let b = kht(&["homology", "trefoil-right"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn glue_reports_verification() {
    let out = kht(&["glue", "cup", "cap"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gluing verified"), "{text}");
}

#[test]
fn exit_codes() {
    // 0: success.
    assert_eq!(kht(&["coherence", "unknot-mixed3"]).status.code(), Some(0));
    // 1: a verification failure (corrupted ladybug rule breaks hexagons).
    assert_eq!(
        kht(&["coherence", "unknot-mixed3", "--corrupt"]).status.code(),
        Some(1)
    );
    // 2: malformed input.
    assert_eq!(kht(&["homology", "no-such-fixture"]).status.code(), Some(2));
    assert_eq!(kht(&["definitely-not-a-subcommand"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["complex", "t24-a"],
        vec!["homology", "figure-eight"],
        vec!["hochschild", "t22-pos", "--k-max", "3"],
    ] {
        let a = kht(&args);
        let b = kht(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}
