//! End-to-end binary behavior: exit codes, deterministic reports, point
//! overrides and parameter-mode commands.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spaceform"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_passes_on_the_main_example() {
    let out = run(&["verify", "kt_example_1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("kt_example_1 (verify): pass"));
    assert!(text.contains("deta_convention=half"));
    assert!(text.contains("tau_factor=3"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_fails_only_on_the_contact_predicate_for_flat_abelian() {
    let out = run(&["verify", "flat_abelian"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let fails: Vec<&str> = text.lines().filter(|l| l.contains("[ FAIL]")).collect();
    assert_eq!(fails.len(), 1, "{text}");
    assert!(fails[0].contains("predicates.contact_metric"));
    assert!(text.contains("fit.pipeline: structure is not contact metric"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = run(&["verify", "kt_example_1", "--json"]);
    let b = run(&["verify", "kt_example_1", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // parallel evaluation does not change the report
    let c = run(&["verify", "kt_example_1", "--json", "--jobs", "4"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn json_report_has_stable_shape() {
    let out = run(&["verify", "sasakian_round", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["manifest"], "sasakian_round");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["environment"]["deta_convention"], "half");
    assert!(v["checks"].as_array().map(|a| !a.is_empty()).unwrap_or(false));
}

#[test]
fn point_override_reports_domain_errors_per_point() {
    let out = run(&["verify", "kt_example_1", "--suite", "fit", "--points", "0,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("fit.point.x1=0,x2=0,x3=0: domain"));
    assert!(text.contains("fit.point.x1=0,x2=0,x3=2: f1=-77/32"));
}

#[test]
fn suites_filter_check_groups() {
    let out = run(&["verify", "kt_example_1", "--suite", "curvature"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("curvature.bianchi_first"));
    assert!(!text.contains("ricci."));
    assert!(!text.contains("fit."));
}

#[test]
fn fit_prints_tables_and_kernel() {
    let out = run(&["fit", "kt_example_1", "--points", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("f1=2 f2=0 f3=2 f4=0"));
    assert!(text.contains("f1=-77/32"));
    assert!(text.contains("kernel span (1, -1/3, 1, 0, 0, 0)"));
    // gauge none on the Sasakian instance: kernel of dimension 4
    let out = run(&["fit", "sasakian_round", "--gauge", "none"]);
    let text = stdout(&out);
    let kernel_rows = text.matches("(0, 0, 0,").count() + text.matches("(1, -1/3,").count();
    assert_eq!(kernel_rows, 4, "{text}");
}

#[test]
fn deform_parameter_mode() {
    let out = run(&["deform", "--km", "0", "0", "--auto"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("a = 1/2"));
    assert!(text.contains("kappa' = -3, mu' = -2"));
    assert!(text.contains("deform.classification: E2"));
    // identity scale
    let out = run(&["deform", "--km", "3/4", "0", "--a", "1"]);
    assert!(stdout(&out).contains("kappa' = 3/4, mu' = 0"));
}

#[test]
fn construct_command_and_boundary() {
    let out = run(&["construct", "--f6", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("valid root 0"));
    assert!(text.contains("(-3, -2, 5)"));
    assert!(text.contains("(f1..f6) = (2, 1, 5, 1, 1/2, 3)"));
    // boundary input is an input error with the constraint in the message
    let out = run(&["construct", "--f6", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("kappa"), "{err}");
}

#[test]
fn unknown_manifest_is_an_input_error() {
    let out = run(&["verify", "no_such_manifest.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn list_names_all_builtins() {
    let out = run(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in [
        "kt_example_1",
        "kt_example_2_data",
        "sasakian_round",
        "flat_abelian",
        "e2_flat",
        "heisenberg_5",
    ] {
        assert!(text.contains(name));
    }
}

#[test]
fn manifest_files_load_from_disk() {
    // the bundled manifest, read through the filesystem path code path
    let dir = tempdir();
    let path = dir.join("m.json");
    std::fs::write(
        &path,
        include_str!("../manifests/e2_flat.json"),
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    std::fs::remove_file(&path).ok();
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("spaceform-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn malformed_manifest_is_field_precise() {
    let dir = tempdir();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{
  "name": "bad",
  "chart": {
    "dimension": 3,
    "coordinates": ["x1", "x2", "x3"],
    "frame": [["1","0","0"],["0","1","0"],["0","0","1/(x1 - x1)"]]
  },
  "structure": {
    "phi": [["0","0","0"],["0","0","-1"],["0","1","0"]],
    "xi": ["1", "0", "0"]
  }
}"#,
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("chart.frame[2][2]"), "{err}");
    std::fs::remove_file(&path).ok();
}
