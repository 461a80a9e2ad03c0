use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use numrad::Matrix;
use numrad_cli::{parse_matrix, parse_matrix_str, serialize_matrix};
use serde_json::Value;

const FIXTURES: &[&str] = &["a", "b", "b_sign_flipped", "c", "d", "diag12", "diag1m1", "id", "n"];

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn numrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numrad"))
        .args(args)
        .env_remove("NUMRAD_GRID")
        .output()
        .unwrap()
}

fn numrad_with(args: &[String]) -> Output {
    numrad(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn radius_of_the_example_matrix() {
    let r = json(&numrad_with(&["radius".into(), fx("a"), "--json".into()]));
    assert!((r["results"]["radius"].as_f64().unwrap() - 1.5).abs() < 1e-7);
    assert_eq!(r["inputs"][0]["dim"], 2);
    assert_eq!(r["tolerances"]["grid"], 2048);
    assert_eq!(r["seed"], 0);
}

#[test]
fn c_is_orthogonal_to_d_for_the_radius() {
    let r = json(&numrad_with(&[
        "orth".into(),
        fx("c"),
        fx("d"),
        "--norm".into(),
        "v".into(),
        "--json".into(),
    ]));
    assert_eq!(r["results"]["decision"], true);
    let r = json(&numrad_with(&[
        "orth".into(),
        fx("c"),
        fx("d"),
        "--norm".into(),
        "op".into(),
        "--json".into(),
    ]));
    assert_eq!(r["results"]["decision"], false);
}

#[test]
fn identity_and_nilpotent_give_equality_with_a_witness() {
    let r = json(&numrad_with(&["triangle".into(), fx("id"), fx("n"), "--json".into()]));
    assert_eq!(r["results"]["equal"], true);
    assert_eq!(r["results"]["verified"], true);
    assert!((r["results"]["lhs"].as_f64().unwrap() - 1.5).abs() < 1e-8);
    let witness = &r["witnesses"][0];
    assert_eq!(witness["label"], "triangle_state");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((witness["entries"][0][0].as_f64().unwrap() - h).abs() < 1e-6);
    let text = numrad_with(&["triangle".into(), fx("id"), fx("n")]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("triangle_state"));
}

#[test]
fn every_subcommand_runs_on_the_fixtures() {
    let (a, b) = (fx("id"), fx("diag12"));
    let runs: Vec<Vec<String>> = vec![
        vec!["norm".into(), fx("a")],
        vec!["range".into(), fx("a"), "--samples".into(), "16".into()],
        vec!["crawford".into(), b.clone()],
        vec!["rho".into(), fx("id"), fx("n"), "--side".into(), "minus".into()],
        vec!["rho".into(), fx("id"), fx("n"), "--method".into(), "state".into()],
        vec!["rho".into(), fx("a"), fx("b"), "--norm".into(), "op".into()],
        vec!["dirorth".into(), fx("c"), fx("d")],
        vec!["posorth".into(), fx("diag1m1"), fx("diag12")],
        vec!["approx".into(), a.clone(), b.clone()],
        vec!["triangle".into(), fx("id"), fx("n"), fx("n")],
        vec!["refined".into(), a, b],
    ];
    for args in runs {
        let out = numrad_with(&args);
        let code = out.status.code();
        // posorth rejects the indefinite diag(1,-1) as a domain error.
        let expected = if args[0] == "posorth" { 1 } else { 0 };
        assert_eq!(
            code,
            Some(expected),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn range_csv_has_one_row_per_sample() {
    let out = numrad_with(&[
        "range".into(),
        fx("a"),
        "--samples".into(),
        "12".into(),
        "--out".into(),
        "csv".into(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert!(lines[0].contains(','));
    for row in &lines[1..] {
        let first = row.split(',').next().unwrap();
        assert!(first.parse::<f64>().is_ok(), "{row}");
    }
}

#[test]
fn fixture_corpus_round_trips() {
    for name in FIXTURES {
        let m = parse_matrix(&fixture(name)).unwrap();
        let text = serialize_matrix(&m);
        let back = parse_matrix_str(&text).unwrap();
        assert_eq!(m, back, "{name}");
        for (x, y) in m.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert_eq!(serialize_matrix(&back), text, "{name}");
    }
}

#[test]
fn golden_ratio_entry_is_read_to_full_precision() {
    let b = parse_matrix(&fixture("b")).unwrap();
    let expected = 1.0 + 5f64.sqrt();
    assert!((b.get(1, 0).re - expected).abs() <= f64::EPSILON * expected);
    let flipped = parse_matrix(&fixture("b_sign_flipped")).unwrap();
    assert_eq!(flipped.get(1, 0).re, -b.get(1, 0).re);
    assert_eq!(
        b,
        Matrix::from_pairs(&[&[(0.0, -2.0), (0.0, 0.0)], &[(expected, 0.0), (0.0, 0.0)]]).unwrap()
    );
}

#[test]
fn reports_are_reproducible() {
    for args in [
        vec!["approx".to_string(), fx("id"), fx("diag12"), "--json".into()],
        vec!["orth".to_string(), fx("a"), fx("b"), "--seed".into(), "9".into()],
        vec![
            "fuzz".to_string(),
            "--dims".into(),
            "2".into(),
            "--trials".into(),
            "4".into(),
            "--json".into(),
        ],
    ] {
        let first = numrad_with(&args);
        let second = numrad_with(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(numrad_with(&["radius".into(), fx("a")]).status.code(), Some(0));

    // Domain errors: unreadable, malformed, non-square and mismatched inputs.
    assert_eq!(numrad(&["radius", "/nonexistent/m.json"]).status.code(), Some(1));
    let nan = scratch("nan.json", r#"{"dim":1,"rows":[[["NaN",0]]]}"#);
    assert_eq!(numrad(&["radius", &nan]).status.code(), Some(1));
    let rect = scratch(
        "rect.json",
        r#"{"dim":2,"rows":[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]]]}"#,
    );
    let out = numrad(&["radius", &rect]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let three = scratch("three.json", &serialize_matrix(&Matrix::identity(3)));
    assert_eq!(numrad_with(&["orth".into(), fx("a"), three]).status.code(), Some(1));
    assert_eq!(
        numrad_with(&[
            "approx".into(),
            fx("a"),
            scratch("zero.json", &serialize_matrix(&Matrix::zeros(2)))
        ])
        .status
        .code(),
        Some(1)
    );

    // Usage errors.
    assert_eq!(numrad(&["bogus"]).status.code(), Some(2));
    assert_eq!(numrad(&[]).status.code(), Some(2));
    assert_eq!(
        numrad_with(&["orth".into(), fx("a"), fx("b"), "--norm".into(), "q".into()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        numrad_with(&["radius".into(), fx("a"), "--grid".into(), "4".into()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        numrad_with(&["radius".into(), fx("a"), "--tol".into(), "-1".into()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(numrad(&["fuzz", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(numrad(&["fuzz", "--dims", "9"]).status.code(), Some(2));
    assert_eq!(
        numrad_with(&[
            "rho".into(),
            fx("a"),
            fx("b"),
            "--norm".into(),
            "op".into(),
            "--method".into(),
            "state".into()
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn grid_flag_wins_over_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_numrad"));
        cmd.args(["radius", &fx("a"), "--json"]).env_remove("NUMRAD_GRID");
        if let Some(e) = env {
            cmd.env("NUMRAD_GRID", e);
        }
        if let Some(f) = flag {
            cmd.args(["--grid", f]);
        }
        json(&cmd.output().unwrap())["tolerances"]["grid"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 2048);
    assert_eq!(run(Some("512"), None), 512);
    assert_eq!(run(Some("512"), Some("64")), 64);
    assert_eq!(run(None, Some("128")), 128);
}
