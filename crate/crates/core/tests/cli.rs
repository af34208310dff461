use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use terp::cli::{run, Outcome};

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/example3.json").display().to_string()
}

fn terp(args: &[&str]) -> Outcome {
    run(std::iter::once("terp").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

fn error_code(out: &Outcome) -> String {
    let v: Value = serde_json::from_str(&out.stderr).expect("stderr is JSON");
    v["error"]["code"].as_str().unwrap().to_string()
}

#[test]
fn spectrum_of_the_fixture() {
    let out = terp(&["spectrum", &fixture()]);
    assert_eq!(out.stdout, "{\n  \"spectrum\": [\n    \"-5/4\",\n    \"0\",\n    \"5/4\"\n  ]\n}\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn unknown_verb_is_a_usage_error() {
    let out = terp(&["frobnicate", &fixture()]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    assert_eq!(error_code(&out), "usage");
}

#[test]
fn malformed_json_exits_with_two() {
    let dir = std::env::temp_dir().join(format!("terp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\"alpha\": [").unwrap();
    let out = terp(&["spectrum", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&out.stderr).unwrap();
    assert!(!v["error"]["message"].as_str().unwrap().is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_file_is_reported_on_stderr() {
    let out = terp(&["hodge", "/nonexistent/lattice.json"]);
    assert_ne!(out.code, 0);
    assert!(out.stdout.is_empty());
    error_code(&out);
}

#[test]
fn csv_is_refused_outside_purity() {
    let out = terp(&["spectrum", &fixture(), "--csv"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_grid_leaves_no_partial_csv() {
    let out = terp(&["purity", "--example3", "--grid", "r=0:2:41", "t=0:1:zero", "--csv"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn purity_sweep_flags_only_wall_points() {
    let out = terp(&["purity", "--example3", "--grid", "r=0:2:41", "t=0:1:21", "--csv"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("r_re,r_im,t_re,t_im,dimH0,pure,sig_plus,sig_minus"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 41 * 21);
    let impure: Vec<&Vec<String>> = rows.iter().filter(|r| r[5] == "false").collect();
    assert!(!impure.is_empty());
    for row in impure {
        let r = format!("{},{}", row[0], row[1]);
        let t = format!("{},{}", row[2], row[3]);
        let ex = json(&terp(&["example3", "--r", &r, "--t", &t]));
        let wall = ex["expected"]["wall"].as_f64().unwrap();
        assert!(wall.abs() < 1e-9, "impure point ({r}; {t}) is off the wall: {wall}");
        assert!(row[6].is_empty() && row[7].is_empty());
    }
    for row in rows.iter().filter(|r| r[5] == "true") {
        let plus: usize = row[6].parse().unwrap();
        let minus: usize = row[7].parse().unwrap();
        assert_eq!(plus + minus, 3);
    }
}

#[test]
fn phi_bound_for_two_by_two() {
    let v = json(&terp(&["phi-bound", "--mu", "2", "--restarts", "8", "--seed", "1"]));
    assert!((v["phi_sup_estimate"].as_f64().unwrap() + 2.0).abs() < 1e-6);
}

#[test]
fn metric_prints_twelve_significant_digits() {
    let out = terp(&["metric", "--example3", "--r", "0.5,0", "--direction", "r"]);
    let v = json(&out);
    assert!(v["tangent_metric"].as_f64().unwrap() > 0.0);
    for token in out.stdout.split(|c: char| !(c.is_ascii_digit() || c == '.' || c == 'e' || c == '-')) {
        let digits: String = token.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
        let digits = digits.trim_start_matches('0');
        assert!(digits.len() <= 12, "{token}");
    }
}

#[test]
fn seeded_verbs_are_deterministic_in_process() {
    let cases: [&[&str]; 3] = [
        &["curvature", "--random", "--mu", "4", "--n", "3", "--seed", "11"],
        &["phi-bound", "--mu", "3", "--restarts", "6", "--seed", "7"],
        &["horizontal-rank", "--witness", "0.5,0.25"],
    ];
    for args in cases {
        let a = terp(args);
        let b = terp(args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let exe = env!("CARGO_BIN_EXE_terp");
    let fixture = fixture();
    let cases: [&[&str]; 3] = [
        &["pmhs", &fixture],
        &["phi-bound", "--mu", "3", "--restarts", "4", "--seed", "3"],
        &["purity", "--example3", "--grid", "r=0:2:9", "t=0:1:5", "--csv"],
    ];
    for args in cases {
        let a = Command::new(exe).args(args).output().unwrap();
        let b = Command::new(exe).args(args).output().unwrap();
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, terp(args).stdout.into_bytes());
    }
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_terp");
    let out = Command::new(exe).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    let out = Command::new(exe).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
