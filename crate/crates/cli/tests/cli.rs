use std::process::{Command, Output};

fn x2susy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_x2susy"))
        .args(args)
        .env_remove("X2SUSY_OUTPUT_DIR")
        .env_remove("X2SUSY_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn potential_csv_has_requested_rows() {
    let o = x2susy(&[
        "potential", "--example", "1", "--alpha", "2", "--enn", "3", "--q-min", "0.5", "--q-max", "4",
        "--steps", "100", "--format", "csv",
    ]);
    assert_eq!(code(&o), 0);
    let body: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(body[0], "q,V_minus,V_plus,psi_1,psi_2,psi_3");
    assert_eq!(body.len(), 101);
}

#[test]
fn potential_row_at_one() {
    let o = x2susy(&[
        "potential", "--example", "1", "--alpha", "2", "--enn", "3", "--q-min", "0.5", "--q-max", "4",
        "--steps", "8",
    ]);
    assert_eq!(code(&o), 0);
    let row = stdout(&o).lines().find(|l| l.starts_with("1,")).expect("q = 1 row").to_string();
    let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 2.735).abs() < 1e-12, "{row}");
}

#[test]
fn hyperbolic_cosh_branch_is_invalid_input() {
    let o = x2susy(&["potential", "--example", "2", "--alpha", "1/2", "--enn", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported"));
}

#[test]
fn verify_rejects_small_enn_and_degenerate_alpha() {
    let o = x2susy(&["verify", "--enn", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("N > 2"));
    let o = x2susy(&["verify", "--alpha", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate alpha"));
}

#[test]
fn bad_flags_are_invalid_input() {
    assert_eq!(code(&x2susy(&["verify", "--stage", "nope"])), 2);
    assert_eq!(code(&x2susy(&["spectrum", "--alpha", "2/0", "--enn", "3"])), 2);
    assert_eq!(code(&x2susy(&["frobnicate"])), 2);
}

#[test]
fn spectrum_of_rational_example() {
    let o = x2susy(&["spectrum", "--example", "1", "--alpha", "2", "--enn", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("eigenvalues: 4, 6, 8"), "{}", stdout(&o));
    let o = x2susy(&["spectrum", "--example", "1", "--alpha", "2", "--enn", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eigenvalues"], serde_json::json!(["4/1", "6/1", "8/1"]));
}

#[test]
fn show_op_emits_operator_json() {
    let o = x2susy(&["show-op", "--family", "j", "--index", "1", "--alpha", "2", "--enn", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let map = v.as_object().expect("order -> coefficient map");
    assert!(map.contains_key("1") && map.contains_key("2"));
    assert!(map["2"]["num"].is_array() && map["2"]["den"].is_array());
    assert_eq!(code(&x2susy(&["show-op", "--family", "k", "--index", "5", "--alpha", "2", "--enn", "4"])), 2);
}

#[test]
fn laguerre_prints_three_exact_relations() {
    let o = x2susy(&["laguerre", "--alpha", "2", "--n-max", "3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rel: Vec<&str> = out.lines().filter(|l| l.starts_with("relation")).collect();
    assert_eq!(rel.len(), 3);
    assert!(rel.iter().all(|l| l.matches("exact match").count() == 2), "{out}");
}

#[test]
fn sector_table_reports_residual() {
    let o = x2susy(&["sector", "--example", "2", "--alpha", "2", "--enn", "3", "--sign", "plus", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r: f64 = v["metadata"]["preservation_residual"].as_str().unwrap().parse().unwrap();
    assert!(r < 1e-6);
    assert_eq!(v["columns"][1], "V_plus");
}

#[test]
fn physical_verify_passes_and_is_deterministic() {
    let args = ["verify", "--stage", "physical", "--enn", "3", "--samples", "5", "--seed", "7"];
    let a = x2susy(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let b = x2susy(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["overall"], "pass");
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["anchor"].as_str().is_some_and(|s| !s.is_empty())));
}

#[test]
fn config_file_and_env_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "example = 1\nalpha = \"2\"\nenn = 4\nformat = \"csv\"\nprecision = 3\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_x2susy"))
        .args(["--config", cfg.to_str().unwrap(), "spectrum", "--enn", "3", "--output", "spec.csv"])
        .env("X2SUSY_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("spec.csv")).unwrap();
    assert_eq!(text, "n,eigenvalue\n1,4\n2,6\n3,8\n");

    let o = Command::new(env!("CARGO_BIN_EXE_x2susy"))
        .args(["potential", "--example", "1", "--alpha", "2", "--enn", "3", "--q-min", "1", "--q-max", "2", "--steps", "2"])
        .env("X2SUSY_PRECISION", "3")
        .output()
        .unwrap();
    assert!(stdout(&o).lines().any(|l| l.starts_with("1.000e0,2.735e0,")), "{}", stdout(&o));

    std::fs::write(&cfg, "colour = 1\n").unwrap();
    let o = x2susy(&["--config", cfg.to_str().unwrap(), "laguerre", "--alpha", "2"]);
    assert_eq!(code(&o), 2);
}
