use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn utx(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_utx"));
    cmd.args(args).env_remove("UT_QUAD_TOL");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn example_config(example: u8) -> String {
    format!("beta = 1.0\nmax_mode = 8\namplitude_modes = 8\n[data]\nexample = {example}\n")
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

const REPORT_KEYS: [&str; 20] = [
    "beta",
    "max_mode",
    "amplitude_modes",
    "dirichlet_modes",
    "vertices",
    "example",
    "rows",
    "unknowns",
    "neumann_coefficients",
    "amplitude_coefficients",
    "residual_norm",
    "condition",
    "rank_deficient",
    "singular_values",
    "row_residual_quantiles",
    "dirichlet_tail_ratio",
    "max_f0_error",
    "max_neumann_error",
    "max_top_side_neumann_error",
    "timings",
];

#[test]
fn example_one_artifacts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "ex1.toml", &example_config(1));
    let out = tmp.path().join("out");
    let o = utx(&["solve", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = REPORT_KEYS.to_vec();
    want.sort_unstable();
    let mut got = keys.clone();
    got.sort_unstable();
    assert_eq!(got, want);
    assert!(r["max_f0_error"].as_f64().unwrap() <= 1e-3);
    assert_eq!(r["rows"].as_u64(), Some(148));
    assert_eq!(r["unknowns"].as_u64(), Some(53));
    assert_eq!(fs::read_to_string(out.join("f0.csv")).unwrap().lines().count(), 362);
    for j in 0..4 {
        let csv = fs::read_to_string(out.join(format!("neumann_side_{j}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 202);
        assert_eq!(csv.lines().next(), Some("t,re,im"));
        let svg = fs::read_to_string(out.join(format!("neumann_side_{j}.svg"))).unwrap();
        assert!(svg.contains("stroke-dasharray"));
    }
}

#[test]
fn example_two_top_side_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "ex2.toml", &example_config(2));
    let out = tmp.path().join("out");
    let o = utx(&["solve", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", "2"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(report(&out)["max_top_side_neumann_error"].as_f64().unwrap() <= 5e-3);
}

#[test]
fn sampled_data_has_no_reference() {
    let tmp = TempDir::new().unwrap();
    let side = format!("[{}]", vec!["[0.1, 0.0]"; 16].join(", "));
    let body = format!(
        "beta = 1.0\nmax_mode = 4\namplitude_modes = 4\n[data]\nsamples = [{}]\n",
        [side.as_str(); 4].join(", ")
    );
    let cfg = write_config(tmp.path(), "s.toml", &body);
    let out = tmp.path().join("out");
    let o = utx(&["solve", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert!(r["example"].is_null() && r["max_f0_error"].is_null());
    assert!(!fs::read_to_string(out.join("f0.svg")).unwrap().contains("stroke-dasharray"));
}

#[test]
fn malformed_config_exits_2_without_artifacts() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    for body in ["beta = ", "beta = -1.0\nmax_mode = 8\namplitude_modes = 8\n[data]\nexample = 1\n"] {
        let cfg = write_config(tmp.path(), "bad.toml", body);
        let o = utx(&["solve", &cfg, "--out", out.to_str().unwrap()], &[]);
        assert_eq!(o.status.code(), Some(2));
        assert!(!out.exists());
    }
    let o = utx(&["solve", "/nonexistent/config.toml", "--out", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn quadrature_failure_exits_3() {
    let tmp = TempDir::new().unwrap();
    let body = format!("{}[quadrature]\nhalf_width = 0.5\n", example_config(1));
    let cfg = write_config(tmp.path(), "q.toml", &body);
    let out = tmp.path().join("out");
    let o = utx(&["solve", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn aliased_amplitude_modes_exit_4_with_artifacts() {
    let tmp = TempDir::new().unwrap();
    let body = "beta = 1.0\nmax_mode = 1\namplitude_modes = 12\n[data]\nexample = 1\n\
                [collocation]\nunit_points = 16\ncircles = []\n";
    let cfg = write_config(tmp.path(), "r.toml", body);
    let out = tmp.path().join("out");
    let o = utx(&["solve", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(&out)["rank_deficient"].as_bool(), Some(true));
}

#[test]
fn identical_runs_give_identical_csv() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "ex2.toml", &example_config(2));
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(utx(&["solve", &cfg, "--out", a.to_str().unwrap()], &[]).status.success());
    assert!(utx(&["solve", &cfg, "--out", b.to_str().unwrap(), "--threads", "3"], &[]).status.success());
    for name in ["f0.csv", "neumann_side_0.csv", "neumann_side_1.csv", "neumann_side_2.csv", "neumann_side_3.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn verify_single_suite() {
    let o = utx(&["verify-examples", "--only", "global-relation"], &[]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("global-relation"));
    assert!(!text.contains("deformation"));
}

#[test]
fn verify_all_suites() {
    let o = utx(&["verify-examples"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    for suite in ["global-relation", "deformation", "side-limit", "examples"] {
        assert!(text.contains(suite));
    }
}

#[test]
fn loose_quadrature_breaks_deformation_equivalence() {
    let o = utx(&["verify-examples", "--only", "deformation"], &[("UT_QUAD_TOL", "1e-3")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn selftest_passes() {
    let o = utx(&["selftest"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}
