use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn secpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secpoly")).args(args).output().expect("binary runs")
}

fn run_with(args: &[&str], files: &[&str]) -> Output {
    let paths: Vec<String> = files.iter().map(|f| data(f).display().to_string()).collect();
    let mut all: Vec<&str> = args.to_vec();
    all.extend(paths.iter().map(String::as_str));
    secpoly(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn verify_main_on_hexagon_passes() {
    let o = run_with(&["verify-main"], &["hex6.pts"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn assoc_row_matches_golden() {
    let o = secpoly(&["--json", "assoc", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fs::read_to_string(data("assoc4.golden.json")).unwrap());
    assert!(stdout(&secpoly(&["assoc", "4"])).starts_with("14 21 9 1\n"));
}

#[test]
fn census_over_the_guard_exits_3() {
    let o = run_with(&["census"], &["tenpoints.pts"]);
    assert_eq!(o.status.code(), Some(3));
    let raised = run_with(&["census", "--limit", "10", "--json"], &["hex6.pts"]);
    assert_eq!(raised.status.code(), Some(0));
}

#[test]
fn hexagon_census_matches_golden() {
    let o = run_with(&["--json", "census", "--apex", "1"], &["hex6.pts"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fs::read_to_string(data("hex6_census.golden.json")).unwrap());
}

#[test]
fn census_json_is_byte_deterministic_across_worker_counts() {
    let args = ["--json", "census", "--apex", "2", "--dim", "1"];
    let path = data("moae6.pts").display().to_string();
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_secpoly"))
            .args(args)
            .arg(&path)
            .env("SECPOLY_WORKERS", workers)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
    let v: serde_json::Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(v["f_vector"], serde_json::json!([16, 24, 10, 1]));
    assert_eq!(v["subdivisions"].as_array().unwrap().len(), 24);
}

#[test]
fn census_schema() {
    let v = json(&run_with(&["--json", "census", "--apex", "2"], &["moae6.pts"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["assoc_f_vector", "f_vector", "n", "per_signature", "verdict"]);
    assert_eq!(v["per_signature"].as_object().unwrap().len(), 27);
    assert_eq!(v["verdict"], "PASS");
}

#[test]
fn degenerate_census_is_not_applicable() {
    let o = run_with(&["--json", "census"], &["fan6.pts"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "N/A");
    let o = run_with(&["verify-main"], &["fan6.pts"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("N/A"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pts");
    fs::write(&bad, "0 0\n1 zero\n").unwrap();
    let o = secpoly(&["census", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let dup = dir.path().join("dup.pts");
    fs::write(&dup, "0 0\n1 0\n0 1\n1 0\n").unwrap();
    assert_eq!(secpoly(&["census", dup.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(secpoly(&["census", "/nonexistent/points"]).status.code(), Some(2));
    assert_eq!(secpoly(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run_with(&["star", "--apex", "1", "--sigma", "+x+"], &["hex6.pts"]).status.code(), Some(2));
}

#[test]
fn lift_with_rational_levels() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h");
    fs::write(&h, "0;0\n0;1\n1/2;0\n0;0\n0;0\n1/2;0\n").unwrap();
    let o = secpoly(&["--json", "lift", data("hex6.pts").to_str().unwrap(), h.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let cells = json(&o)["subdivision"]["cells"].as_array().unwrap().len();
    assert!(cells >= 3);
}

#[test]
fn signature_of_a_subdivision_file() {
    let o = run_with(&["--json", "signature", "--apex", "1"], &["hex6.pts", "hex6_split.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["signature"], "0--");
}

#[test]
fn star_and_completion() {
    let o = run_with(&["--json", "star", "--apex", "1", "--sigma", "0-+"], &["hex6.pts"]);
    let v = json(&o);
    assert_eq!(v["cells_above"], serde_json::json!([[1, 2, 3, 5], [0, 1, 5]]));
    let o = run_with(&["--json", "complete-star", "--apex", "2", "--sigma", "+-0"], &["moae6.pts"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["heights"][0].as_array().unwrap().iter().all(|h| h.is_string()));
}

#[test]
fn well_formed_reports_dimension() {
    let o = run_with(&["--json", "well-formed", "--apex", "1", "--sigma", "---", "--delta", "1"], &["hex6.pts"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["face_dimension"], 1);
    assert_eq!(v["verdict"], "PASS");
    let o = run_with(&["well-formed", "--apex", "1", "--sigma", "---", "--delta", "3"], &["hex6.pts"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stratify_passes_on_moae() {
    let o = run_with(&["--json", "stratify", "--apex", "2"], &["moae6.pts"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "PASS");
}

#[test]
fn catalan_hill_and_two_circle() {
    let v = json(&secpoly(&["--json", "catalan", "2,2", "--dim", "1"]));
    assert_eq!((v["convolution"].as_u64(), v["faces_of_sum"].as_u64()), (Some(4), Some(21)));
    assert_eq!(json(&secpoly(&["--json", "hill", "7"]))["z"], 9);
    let o = secpoly(&["--json", "two-circle", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["crossings"].as_u64(), v["chambers"].as_u64()), (Some(18), Some(40)));
    assert_eq!(secpoly(&["two-circle", "4"]).status.code(), Some(2));
}

#[test]
fn gale_and_duality() {
    let o = run_with(&["--json", "duality"], &["cyclic7.pts"]);
    assert_eq!(stdout(&o), fs::read_to_string(data("cyclic7_duality.golden.json")).unwrap());
    let v = json(&run_with(&["--json", "gale"], &["hex6.pts"]));
    assert_eq!(v["chambers"], 14);
    let v = json(&run_with(&["--json", "duality"], &["moae6.pts"]));
    assert_eq!((v["generic"].as_bool(), v["chambers"].as_u64()), (Some(false), Some(16)));
    let perturbed = run_with(&["--json", "duality", "--perturb"], &["cyclic7.pts"]);
    assert_eq!(json(&perturbed)["chambers"], 25);
    assert_eq!(run_with(&["duality"], &["fan6.pts"]).status.code(), Some(2));
}
