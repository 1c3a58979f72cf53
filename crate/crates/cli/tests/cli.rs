use std::fs;
use std::process::{Command, Output};

fn zxz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zxz"))
        .args(args)
        .env_remove("ZXZ_OUTPUT_DIR")
        .output()
        .expect("run zxz")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fidelity_json_for_ideal_pulse() {
    let o = zxz(&[
        "fidelity", "--theta", "pi:0.8", "--phi", "pi:1.1", "--lambda", "pi:1.6", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["f_original"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["case"], "Ideal");
}

#[test]
fn negative_angles_are_values_not_flags() {
    let o = zxz(&[
        "fidelity", "--theta", "-1.2", "--delta", "pi:-0.2", "--json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn mitigation_reaches_unit_fidelity_when_coverable() {
    let o = zxz(&[
        "mitigate", "--theta", "1", "--phi", "2", "--lambda", "3", "--delta", "0.3", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["achieved_fidelity"].as_f64().unwrap() > 1.0 - 1e-9);
    assert_eq!(v["coverable"], true);
}

#[test]
fn validation_errors_exit_1() {
    assert_eq!(zxz(&["fidelity", "--theta", "pie"]).status.code(), Some(1));
    assert_eq!(zxz(&["fidelity"]).status.code(), Some(1));
    assert_eq!(
        zxz(&["universality", "--samples", "10"]).status.code(),
        Some(1)
    );
    assert_eq!(zxz(&["sweep", "--recipe", "nope"]).status.code(), Some(1));
    let o = zxz(&["sweep", "--recipe", "figS2a", "--set", "steps=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("steps"));
    assert_eq!(zxz(&["--help"]).status.code(), Some(0));
}

#[test]
fn io_errors_exit_2() {
    let o = zxz(&["sweep", "--config", "/nonexistent/zxz.cfg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = zxz(&[
        "sweep",
        "--recipe",
        "figS2a",
        "--set",
        "steps=3",
        "-o",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_violation_exits_3() {
    // A single Nelder-Mead iteration cannot reach the analytic optimum.
    let o = zxz(&[
        "sweep",
        "--recipe",
        "figS2f",
        "--set",
        "steps=5",
        "--set",
        "search.max_iters=1",
        "--set",
        "search.grid=8",
        "--check",
    ]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn csv_has_header_plus_one_line_per_step() {
    let o = zxz(&["sweep", "--recipe", "figS2a", "--set", "steps=3", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.ends_with('\n'));
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "x,f_ori_analytic,f_ori_numeric");
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let args = [
        "sweep",
        "--recipe",
        "fig2b",
        "--set",
        "steps=21",
        "--set",
        "outputs=f_ori_analytic,f_best_numeric",
        "--format",
        "json",
    ];
    let a = zxz(&args);
    let b = zxz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let mc = [
        "sweep",
        "--set",
        "mode=universality_vs_delta",
        "--set",
        "outputs=un_analytic,un_monte_carlo,un_stderr",
        "--set",
        "mc_samples=10000",
        "--set",
        "steps=4",
        "--set",
        "seed=7",
    ];
    let a = zxz(&mc);
    let b = zxz(&mc);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_zxz"))
        .args([
            "sweep", "--recipe", "figS2e", "--set", "steps=4", "--format", "json",
        ])
        .env("ZXZ_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("figS2e.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(
        &cfg,
        "# average fidelities\nmode = average_fidelity_vs_delta\nstart = 0\nstop = pi:0.4\nsteps = 5\n\
         outputs = f_ori_average, f_best_average\nquadrature_points = 2000\n",
    )
    .unwrap();
    let out = dir.path().join("avg.csv");
    let o = zxz(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "steps=3",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("delta,f_ori_average,f_best_average\n"));
}

#[test]
fn recipes_are_listed_and_shown() {
    let o = zxz(&["sweep", "--list-recipes"]);
    let names = stdout(&o);
    assert_eq!(names.lines().count(), 12);
    assert!(names.lines().any(|l| l == "figS2j"));
    let o = zxz(&["sweep", "--show-recipe", "figS2j"]);
    assert!(stdout(&o).contains("path    = -1, 1, 2"));
}
