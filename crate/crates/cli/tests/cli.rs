use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn gext(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gext"));
    c.args(args);
    for (k, _) in std::env::vars() {
        if k.starts_with("GEXT_") {
            c.env_remove(k);
        }
    }
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn pair(fiber: &str, base: &str) -> Vec<String> {
    vec![String::from("--fiber"), fixture(fiber), String::from("--base"), fixture(base)]
}

fn run(cmd: &str, mut rest: Vec<String>) -> Output {
    rest.insert(0, cmd.to_string());
    let args: Vec<&str> = rest.iter().map(String::as_str).collect();
    gext(&args, &[])
}

fn with(mut v: Vec<String>, extra: &[&str]) -> Vec<String> {
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

#[test]
fn classify_lists_two_classes_for_z2_by_z2() {
    let o = run("classify", with(pair("bz2.json", "bz2.json"), &["--verify"]));
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["verdict"], "positive");
    assert_eq!(r["result"]["class_count"], 2);
    assert_eq!(r["result"]["verification"]["each_matches_one"], true);
    // the brute-force census agrees
    let c = report(&run("census", pair("bz2.json", "bz2.json")));
    assert_eq!(c["result"]["class_count"], 2);
}

#[test]
fn validate_rejects_the_corrupted_fixture() {
    let o = run("validate", vec![String::from("--groupoid"), fixture("bz2_corrupt.json")]);
    assert_eq!(o.status.code(), Some(2));
    let r = report(&o);
    assert_eq!(r["verdict"], "error");
    let v = r["error"]["violations"].as_array().unwrap();
    assert!(!v.is_empty());
    assert!(v.iter().any(|x| x["kind"] == "InverseViolation"));

    let o = run("validate", vec![String::from("--groupoid"), fixture("bz2_truncated.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&o)["error"]["kind"], "ParseError");
}

#[test]
fn obstruction_of_a_cocycle_is_zero_with_a_witness() {
    let o = run("obstruction", with(pair("bz2.json", "bz2.json"), &["--cocycle", &fixture("cocycle_z4.json")]));
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["result"]["zero"], true);
    assert_eq!(r["result"]["class"], serde_json::json!([0]));
    assert_eq!(r["result"]["witness"]["degree"], 2);
}

#[test]
fn trivialized_cofactor_passes_the_cocycle_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let skew = fixture("cofactor_skew_bz2_over_bz3.json");
    let o = run("check-cocycle", with(pair("bz2.json", "bz3.json"), &["--cocycle", &skew]));
    assert_eq!(o.status.code(), Some(1));
    assert!(report(&o)["result"]["failure"]["minimal_violation"].is_array());

    let o = run("trivialize", with(pair("bz2.json", "bz3.json"), &["--cocycle", &skew, "--out", &out]));
    assert_eq!(o.status.code(), Some(0));
    let fixed = dir.path().join("cocycle.json").display().to_string();
    let o = run("check-cocycle", with(pair("bz2.json", "bz3.json"), &["--cocycle", &fixed]));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn build_then_extract_recovers_the_cocycle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run("build", with(pair("bz2.json", "bz2.json"), &["--cocycle", &fixture("cocycle_z4.json"), "--out", &out]));
    assert_eq!(o.status.code(), Some(0));
    let ext = dir.path().join("extension.json").display().to_string();
    let r = report(&run("extract", with(pair("bz2.json", "bz2.json"), &["--extension", &ext])));
    let given: Value = serde_json::from_str(&std::fs::read_to_string(fixture("cocycle_z4.json")).unwrap()).unwrap();
    assert_eq!(r["result"]["cocycle"], given);

    // a groupoid whose labels are not pairs is a negative verdict
    let o = run("extract", with(pair("bz2.json", "bz2.json"), &["--extension", &fixture("bz3.json")]));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inequivalent_cocycles_exit_with_one() {
    let args = with(pair("bz2.json", "bz2.json"), &["--cocycle", &fixture("cocycle_z4.json"), "--other"]);
    let o = run("equivalent", with(args.clone(), &[&fixture("cocycle_trivial_bz2.json")]));
    assert_eq!(o.status.code(), Some(1));
    let o = run("equivalent", with(args, &[&fixture("cocycle_z4.json")]));
    assert_eq!(o.status.code(), Some(0));
    assert!(report(&o)["result"]["transformations"].is_object());
}

#[test]
fn refinements_agree_with_the_fiber_product() {
    let o = run(
        "refine-pullback",
        with(
            pair("bz2.json", "pair2.json"),
            &[
                "--cocycle",
                &fixture("cocycle_trivial_bz2_over_pair2.json"),
                "--cover",
                &fixture("cover_points.json"),
                "--other",
                &fixture("cocycle_trivial_bz2_over_pair2.json"),
                "--other-cover",
                &fixture("cover_whole.json"),
            ],
        ),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["result"]["matches_fiber_product"], true);
    assert_eq!(r["result"]["equivalent_on_common_refinement"], true);
}

#[test]
fn cohomology_backends_agree_on_the_cyclic_base() {
    let o = run("cohomology", vec!["--base".into(), fixture("bz2.json"), "--degree".into(), "2".into(), "--backend".into(), "both".into()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["result"]["invariant_factors"], serde_json::json!([2]));
    assert_eq!(r["result"]["cross_check"]["agree"], true);
}

#[test]
fn unknown_commands_and_bad_flags_are_input_errors() {
    assert_eq!(gext(&["frobnicate"], &[]).status.code(), Some(2));
    assert_eq!(gext(&["center", "--groupoid", &fixture("bz2.json"), "--cap-saut", "0"], &[]).status.code(), Some(2));
    assert_eq!(gext(&["center", "--groupoid", "/nonexistent.json"], &[]).status.code(), Some(2));
}

#[test]
fn flags_override_environment_which_overrides_defaults() {
    let g = fixture("bz2.json");
    let r = report(&gext(&["center", "--groupoid", &g], &[]));
    assert_eq!(r["config"]["seed"], 20240607);
    assert_eq!(r["config"]["convention"], "standard");
    let env = [("GEXT_SEED", "5"), ("GEXT_CONVENTION", "flipped")];
    let r = report(&gext(&["center", "--groupoid", &g], &env));
    assert_eq!(r["config"]["seed"], 5);
    assert_eq!(r["config"]["convention"], "flipped");
    let r = report(&gext(&["center", "--groupoid", &g, "--seed", "9"], &env));
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut v: Vec<(PathBuf, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (PathBuf::from(p.file_name().unwrap()), std::fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn reports_are_byte_stable() {
    let cases: Vec<(&str, Vec<String>)> = vec![
        ("classify", pair("bz2.json", "bz2.json")),
        ("census", pair("bz2.json", "bz2.json")),
        ("obstruction", with(pair("bz2.json", "bz3.json"), &["--cocycle", &fixture("cofactor_skew_bz2_over_bz3.json")])),
        ("aut", vec!["--groupoid".into(), fixture("bz3.json")]),
    ];
    for (cmd, args) in cases {
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let o1 = run(cmd, with(args.clone(), &["--out", &d1.path().display().to_string()]));
        let o2 = run(cmd, with(args.clone(), &["--out", &d2.path().display().to_string()]));
        assert_eq!(o1.stdout, o2.stdout, "{cmd}");
        let (s1, s2) = (snapshot(d1.path()), snapshot(d2.path()));
        assert!(!s1.is_empty(), "{cmd}");
        assert_eq!(s1, s2, "{cmd}");
        assert_eq!(std::fs::read(d1.path().join("report.json")).unwrap(), o1.stdout);
    }
}
