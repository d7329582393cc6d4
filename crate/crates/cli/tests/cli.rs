use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/a2.germ")
}

fn garside(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_garside"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_fixture(cmd: &str, rest: &[&str]) -> Output {
    let path = fixture();
    let mut args = vec![cmd, "--file", path.to_str().unwrap()];
    args.extend_from_slice(rest);
    garside(&args)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn validate_reports_counts() {
    let out = with_fixture("validate", &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("objects: 1\n"));
    assert!(text.contains("simples: 6\n"));
    assert!(text.contains("phi_order: 2\n"));
}

#[test]
fn divided_count() {
    let out = garside(&[
        "divide",
        "--builtin",
        "artin_symmetric",
        "--param",
        "3",
        "--m",
        "3",
        "--count",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "17\n");
}

#[test]
fn periodic_certificate() {
    let out = garside(&[
        "periodic",
        "--builtin",
        "artin_symmetric",
        "--param",
        "3",
        "--word",
        "s D^1",
        "--p",
        "4",
        "--q",
        "3",
        "--certify",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("bestvina_form: (s, k=1)\n"));
    assert!(text.contains("object: (s,t,s)\n"));
    assert!(text.contains("conjugation verified"));
}

#[test]
fn honest_negatives_exit_four() {
    let out = with_fixture("periodic", &["--word", "st", "--p", "2", "--q", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("periodic: false"));
    let out = with_fixture("periodic", &["--word", "st", "--p", "2", "--q", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out)
        .contains("periodic: true\nbestvina_form: none\nreason: p = 2 is not congruent to 1 modulo q = 3\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.germ");
    std::fs::write(&bad, "garside-germ v1\nobject x\nsimple a : x -> y\n").unwrap();
    assert_eq!(
        garside(&["validate", "--file", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let invalid = dir.path().join("invalid.germ");
    std::fs::write(
        &invalid,
        "garside-germ v1\nobject x\nsimple a : x -> x\nsimple b : x -> x\n",
    )
    .unwrap();
    let out = garside(&["validate", "--file", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    assert_eq!(garside(&["validate"]).status.code(), Some(2));
    assert_eq!(
        garside(&["nf", "--builtin", "artin_symmetric", "--param", "9", "--word", "s"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(with_fixture("nf", &["--word", "s q"]).status.code(), Some(2));
    assert_eq!(
        with_fixture("summit", &["--word", "s t s t", "--budget", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        with_fixture("summit", &["--word", "s", "--budget", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn word_arithmetic() {
    let out = with_fixture("mul", &["--word", "s t", "--word", "s"]);
    assert!(stdout(&out).starts_with("normal_form: @x D^1\n"));
    let out = with_fixture("inv", &["--word", "s t"]);
    assert!(stdout(&out).starts_with("normal_form: @x s D^-1\n"));
    let out = with_fixture("conj", &["--word", "s", "--word", "D"]);
    assert!(stdout(&out).starts_with("normal_form: @x t\n"));
    let out = with_fixture("nf", &["--word", "s", "--word", "t"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conjugacy_commands() {
    let out = with_fixture("isconj", &["--word", "s", "--word", "t"]);
    let text = stdout(&out);
    assert!(text.contains("conjugate: true\n") && text.contains("verified: true\n"));
    let out = with_fixture("isconj", &["--word", "s", "--word", "st"]);
    assert!(stdout(&out).contains("conjugate: false\n"));
    let out = with_fixture("summit", &["--word", "s t", "--parallel"]);
    assert!(stdout(&out).contains("elements: 2\n  @x st via @x\n  @x ts via @x s\n"));
}

#[test]
fn classification_and_centralizer() {
    let out = with_fixture("classify", &["--p", "4", "--q", "3"]);
    assert_eq!(
        stdout(&out),
        "classes: 1\nclass_1_objects: 2\n  (s,t,s)\n  (t,s,t)\nclass_1_representative: @x s D^1\n"
    );
    let out = with_fixture("centralizer", &["--p", "1"]);
    assert!(stdout(&out).contains("atoms: 1\n  D\n"));
    let out = with_fixture("centralizer", &["--p", "2"]);
    assert!(stdout(&out).contains("whole_germ: true\n"));
    assert_eq!(
        with_fixture("classify", &["--p", "2", "--q", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn nerve_and_polynomial() {
    let text = stdout(&with_fixture("nerve", &[]));
    assert!(text.contains("nondegenerate: 1 5 6 2\n"));
    assert!(text.contains("euler_characteristic: 0\n"));
    assert!(text.contains("cyclic_identities: true\n"));
    let text = stdout(&with_fixture("zpoly", &[]));
    assert!(text.contains("degree: 3\n") && text.contains("predicted_6: 106\n"));
    assert_eq!(with_fixture("zpoly", &["--samples", "2"]).status.code(), Some(2));
}

#[test]
fn exports_and_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("ball.dot");
    let out = with_fixture("cover", &["--radius", "1", "--out", dot.to_str().unwrap()]);
    assert!(stdout(&out).contains("vertices: 6\nedges: 11\n"));
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph cover_ball {"));

    let germ = dir.path().join("a3.germ");
    let out = garside(&[
        "builtin",
        "--family",
        "artin_symmetric",
        "--param",
        "4",
        "--out",
        germ.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&garside(&["validate", "--file", germ.to_str().unwrap()]));
    assert!(text.contains("simples: 24\n") && text.contains("garside_dimension: 6\n"));

    let printed = stdout(&garside(&["builtin", "--builtin", "artin_symmetric", "--param", "3"]));
    let reparsed = dir.path().join("a2.germ");
    std::fs::write(&reparsed, &printed).unwrap();
    assert_eq!(
        stdout(&garside(&["validate", "--file", reparsed.to_str().unwrap()])),
        stdout(&with_fixture("validate", &[]))
    );

    let text = stdout(&garside(&[
        "validate",
        "--builtin",
        "divided",
        "--base",
        "artin_symmetric",
        "--base-param",
        "3",
        "--param",
        "2",
    ]));
    assert!(text.contains("objects: 6\n"));
}

#[test]
fn output_is_stable() {
    let args = [
        "summit",
        "--builtin",
        "dual_braid",
        "--param",
        "4",
        "--word",
        "p12 p34 p23",
        "--json-like",
    ];
    let first = garside(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&garside(&args)));
    assert!(stdout(&first).starts_with("{\n  inf: "));
}
