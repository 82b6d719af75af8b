//! End-to-end runs of the binary against the fixture specs.
//!
//! Golden files live in `fixtures/golden/`; run with `BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::Command;

use crystal_orders::cli::{parse_spec, SpecFile};

const SPECS: [&str; 4] = ["t1", "t2", "t3", "u2_eq_5"];

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run(spec: &str, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_crystal-orders"))
        .arg("--ring")
        .arg(fixtures().join(format!("{spec}.spec")))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn golden_commands() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("validate", vec!["validate"]),
        ("maximize", vec!["maximize"]),
        ("factor", vec!["factor", "ideal"]),
        ("gr-factor", vec!["gr-factor", "ideal"]),
    ]
}

#[test]
fn golden_reports() {
    let bless = std::env::var_os("BLESS").is_some();
    for spec in SPECS {
        for (label, args) in golden_commands() {
            let (code, first) = run(spec, &args);
            assert_eq!(code, 0, "{spec} {label}: {first}");
            let (_, second) = run(spec, &args);
            assert_eq!(first, second, "{spec} {label} differs between runs");
            let path = fixtures().join("golden").join(format!("{spec}.{label}.json"));
            if bless {
                std::fs::write(&path, &first).unwrap();
            }
            let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            assert_eq!(first, want, "{spec} {label} differs from golden file");
        }
    }
}

#[test]
fn spec_files_print_parse_fixpoint() {
    for spec in SPECS.iter().chain(&["tbad"]) {
        let text = std::fs::read_to_string(fixtures().join(format!("{spec}.spec"))).unwrap();
        let parsed: SpecFile = parse_spec(&text).unwrap();
        let printed = parsed.to_string();
        assert_eq!(parse_spec(&printed).unwrap(), parsed, "{spec}");
        assert_eq!(parse_spec(&printed).unwrap().to_string(), printed, "{spec}");
    }
}

#[test]
fn exit_codes() {
    let (code, out) = run("tbad", &["validate"]);
    assert_eq!(code, 2);
    assert!(out.contains("\"identity\": \"α(e,g)=1\""), "{out}");
    let (code, out) = run("t3", &["--oracle", "--budget", "100000", "maximize"]);
    assert_eq!(code, 3);
    assert!(out.contains("\"code\": \"budget\""));
    let (code, _) = run("t3", &["factor", "missing"]);
    assert_eq!(code, 1);
    let (code, out) = run("t3", &["maximize", "p2"]);
    assert_eq!(code, 1);
    assert!(out.contains("not_order"));
}

#[test]
fn quaternion_commands() {
    let (code, out) = run("t3", &["maximize"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"index\": \"2\""));
    let (code, out) = run("t3", &["factor", "ideal"]);
    assert_eq!(code, 0);
    // 6H = P2^2 · 3H
    assert!(out.contains("\"below\": \"2\",\n        \"exponent\": \"2\""), "{out}");
    assert!(out.contains("\"below\": \"3\",\n        \"exponent\": \"1\""), "{out}");
    let (code, out) = run("t3", &["phi", "hurwitz", "conjugate", "p2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"two_sided\": true"));
    let (code, out) = run("t3", &["--oracle", "report"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"certified\": true") && out.contains("\"standard_is_maximal\": false"));
    let (code, out) = run("t3", &["inverse", "p2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"forms_agree\": true"));
    let (code, out) = run("t3", &["factor-left", "left"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"reassembles\": true"));
    let (code, out) = run("t2", &["gr-maximize"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"already_maximal\": true"));
}
