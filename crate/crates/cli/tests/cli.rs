use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubecheck")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(code(&["list"]), 0);
    assert_eq!(code(&["show", "e7:new"]), 0);
    assert_eq!(code(&["quotient", "d4:new", "s1 t(1) s1", "t(1) s1 t(1)"]), 0);
    assert_eq!(code(&["quotient", "d4:new", "s1", "s2"]), 1);
    assert_eq!(code(&["certify", "e6:yamada"]), 1);
    // fuel runs out before the first reversal can be shown to diverge
    assert_eq!(code(&["--fuel", "2", "cube", "affine-a:classical:3", "r1", "r3", "r2"]), 2);
    assert_eq!(code(&["cube", "affine-a:classical:3", "r1", "r3", "r2"]), 0);
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&[]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
    assert_eq!(code(&["reverse", "no-such-presentation", "s1"]), 3);
    assert_eq!(code(&["reverse", "d4:new", "s9^-1"]), 3);
    assert_eq!(code(&["certify", "d4:new", "--t-bound", "many"]), 3);
    let out = run(&["reverse", "d4:new"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn json_output_is_byte_stable() {
    for args in [
        &["--format", "json", "certify", "e8:new"][..],
        &["--format", "json", "reverse", "d4:new", "t(2)^-1 s3 s3", "--left"],
        &["--format", "json", "oracle", "scan", "d4:new", "--max-len", "2"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap();
    }
}

#[test]
fn text_trace_names_each_relation() {
    let out = String::from_utf8(run(&["reverse", "d4:new", "t(2)^-1 s3 s3"]).stdout).unwrap();
    assert_eq!(out.matches("R1 i=2,j=3").count(), 2, "{out}");
    assert!(out.contains("terminal after 3 steps: s3 t(2) t(2) s3^-1 t(2)^-1"), "{out}");
}
