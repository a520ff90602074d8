use std::process::{Command, Output};

use orient_duality::literal::{parse_class, parse_hom};
use orient_duality::{CoeffRing, RingKind, Space};
use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orient-duality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    stdout(&out)
}

fn json_of(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&ok(&full)).unwrap()
}

#[test]
fn kernel_on_p2_additive() {
    let v = json_of(&["kernel", "--theory", "additive", "--space", "P2"]);
    assert_eq!(
        v,
        json!({
            "space": "P2xP2",
            "terms": [
                {"zeta": [2, 0], "coeff": "1"},
                {"zeta": [1, 1], "coeff": "1"},
                {"zeta": [0, 2], "coeff": "1"},
            ]
        })
    );
    assert_eq!(
        ok(&["kernel", "--theory", "additive", "--space", "P2"]),
        "P2xP2: z1^2 + z1*z2 + z2^2\n"
    );
}

#[test]
fn euler_of_diagonal_divisor() {
    let text = ok(&[
        "euler",
        "--theory",
        "multiplicative",
        "--space",
        "P1xP1",
        "--degrees",
        "1,1",
    ]);
    assert_eq!(text, "P1xP1: z1 + z2 - beta*z1*z2\n");
    let neg = ok(&[
        "euler",
        "--theory",
        "multiplicative",
        "--space",
        "P1",
        "--degrees",
        "-1",
    ]);
    assert_eq!(neg, "P1: -z1\n");
    let neg = ok(&[
        "euler",
        "--theory",
        "multiplicative",
        "--space",
        "P2",
        "--degrees",
        "-1",
    ]);
    assert_eq!(neg, "P2: -z1 - beta*z1^2\n");
}

#[test]
fn verify_small_grid_passes() {
    let out = run(&[
        "verify",
        "--theory",
        "multiplicative",
        "--space",
        "P1xP1",
        "--truncation",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).ends_with("16 passed, 0 failed\n"));
}

#[test]
fn text_and_json_agree() {
    let ring = CoeffRing::new(RingKind::UniversalRational, 10).unwrap();
    for space in ["P2", "P1xP2"] {
        let args = ["kernel", "--theory", "universal", "--space", space];
        let text = ok(&args);
        let v = json_of(&args);
        let x = Space::parse(v["space"].as_str().unwrap()).unwrap();
        let class = parse_class(&v.to_string(), &x, &ring).unwrap();
        assert_eq!(text, format!("{x}: {class}\n"));
    }
    let args = ["fundamental", "--theory", "universal", "--space", "P1xP1"];
    let text = ok(&args);
    let v = json_of(&args);
    let x = Space::new(vec![1, 1]);
    assert_eq!(
        text,
        format!("{x}: {}\n", parse_hom(&v.to_string(), &x, &ring).unwrap())
    );
}

fn with<'a>(common: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    [common, extra].concat()
}

#[test]
fn dualize_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    let hom = dir.path().join("hom.json");
    let back = dir.path().join("back.json");
    let common = ["--theory", "multiplicative", "--space", "P2xP1", "--format", "json"];
    ok(&with(
        &common,
        &["euler", "--degrees", "2,-1", "--out", class.to_str().unwrap()],
    ));
    let class_arg = format!("@{}", class.display());
    let hom_arg = format!("@{}", hom.display());
    ok(&with(
        &common,
        &[
            "dualize",
            "--direction",
            "to-hom",
            "--class",
            &class_arg,
            "--out",
            hom.to_str().unwrap(),
        ],
    ));
    ok(&with(
        &common,
        &[
            "dualize",
            "--direction",
            "to-coh",
            "--class",
            &hom_arg,
            "--out",
            back.to_str().unwrap(),
        ],
    ));
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&class).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn pushforward_along_literals() {
    let one = r#"{"terms":[{"zeta":[0],"coeff":"1"}]}"#;
    let text = ok(&[
        "pushforward",
        "--theory",
        "multiplicative",
        "--space",
        "P1",
        "--morphism",
        "embed(1,2)",
        "--class",
        one,
    ]);
    assert_eq!(text, "P2: z1\n");
    let text = ok(&[
        "pushforward",
        "--theory",
        "multiplicative",
        "--space",
        "P2",
        "--morphism",
        "proj(0)",
        "--class",
        r#"{"terms":[{"zeta":[0],"coeff":"1"}]}"#,
    ]);
    assert_eq!(text, "pt: beta^2\n");
    let text = ok(&[
        "pushforward",
        "--theory",
        "additive",
        "--space",
        "P1",
        "--morphism",
        "diag(1)",
        "--class",
        one,
    ]);
    assert_eq!(text, "P1xP1: z1 + z2\n");
    let text = ok(&[
        "pushforward",
        "--theory",
        "additive",
        "--space",
        "P1xP2",
        "--morphism",
        "perm(2,1)",
        "--class",
        r#"{"terms":[{"zeta":[1,2],"coeff":"3"}]}"#,
    ]);
    assert_eq!(text, "P2xP1: 3*z1^2*z2\n");
}

#[test]
fn ring_summary() {
    let v = json_of(&["ring", "--theory", "multiplicative", "--truncation", "4"]);
    assert_eq!(v["pn_classes"], json!(["1", "beta", "beta^2", "beta^3"]));
    assert_eq!(v["law"], json!([{"i": 1, "j": 1, "coeff": "-beta"}]));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    let parse = run(&[
        "pushforward",
        "--theory",
        "additive",
        "--space",
        "P2",
        "--morphism",
        "diag(1);frob(2)",
        "--class",
        "{}",
    ]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(stderr(&parse).contains("position 8 near `frob`"), "{}", stderr(&parse));
    let space = run(&["kernel", "--theory", "additive", "--space", "P2xQ1"]);
    assert_eq!(space.status.code(), Some(2));
    assert!(stderr(&space).contains("`Q1`"), "{}", stderr(&space));
    assert_eq!(
        code(&[
            "kernel",
            "--theory",
            "additive",
            "--space",
            "P3xP3",
            "--truncation",
            "6"
        ]),
        Some(3)
    );
    assert_eq!(
        code(&[
            "verify",
            "--theory",
            "additive",
            "--space",
            "P2xP2",
            "--truncation",
            "4"
        ]),
        Some(3)
    );
    assert_eq!(code(&["kernel", "--theory", "bogus", "--space", "P1"]), Some(2));
    assert_eq!(code(&["kernel", "--space", "P1"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(
        code(&["euler", "--theory", "additive", "--space", "P1xP1", "--degrees", "1"]),
        Some(2)
    );
    assert_eq!(code(&["--help"]), Some(0));
    let failing = run(&[
        "verify",
        "--theory",
        "multiplicative",
        "--space",
        "P2",
        "--truncation",
        "4",
        "--mutate",
        "kernel:1,2",
        "--checks",
        "V10-poincare-roundtrip",
    ]);
    assert_eq!(failing.status.code(), Some(1));
    assert!(stdout(&failing).contains("FAIL"));
}

#[test]
fn verify_json_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        ok(&[
            "verify",
            "--theory",
            "all",
            "--space",
            "P1,P1xP1",
            "--truncation",
            "6",
            "--seed",
            "7",
            "--samples",
            "2",
            "--format",
            "json",
            "--out",
            p.to_str().unwrap(),
        ]);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let reports: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 3 * 2 * 16);
}
