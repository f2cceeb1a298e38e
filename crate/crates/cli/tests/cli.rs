use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const CONFIG: &str = r#"
gamma = 2.0
epsilon = 0.1
n_cells = 64
T = 0.25

[initial.plus]
mean = 5.0
modes = [{ wavenumber = 1, amplitude = 1.0 }]

[initial.minus]
mean = 0.5
modes = [{ wavenumber = 1, amplitude = 0.2 }]
"#;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alignkin")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn simulate_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let csv = fs::read_to_string(a.join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,x,f_plus,f_minus"));
    assert_eq!(csv, fs::read_to_string(b.join("trajectory.csv")).unwrap());
    assert_eq!(
        fs::read(a.join("run.toml")).unwrap(),
        fs::read(b.join("run.toml")).unwrap()
    );
}

#[test]
fn overrides_reach_the_recorded_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("o");
    let o = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--override",
        "n_cells=32",
        "--override",
        "initial.minus.mean=0.4",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recorded = fs::read_to_string(out.join("run.toml")).unwrap();
    assert!(recorded.contains("n_cells = 32"));
    assert!(recorded.contains("mean = 0.4"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["bogus"])), 1);
    assert_eq!(code(&run(&["simulate"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &CONFIG.replace("gamma = 2.0", "gamma = 1.0"));
    let o = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamma"));
    let cfg = write_config(dir.path(), &format!("gamam = 3.0\n{CONFIG}"));
    assert_eq!(code(&run(&["simulate", "--config", cfg.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn failed_check_exits_three() {
    // mean 3 against minority 0.7 violates the separation needed by the layer bound
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("o");
    let o = run(&[
        "layer",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--override",
        "initial.plus.mean=3.0",
        "--override",
        "initial.plus.modes=[]",
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn layer_passes_on_separated_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("o");
    let o = run(&["layer", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("layer.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("tau,x,h"));
    assert!(out.join("layer.toml").exists());
}

#[test]
fn unstable_demo_is_gated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &CONFIG.replace("gamma = 2.0", "gamma = 2.0\nexperiment = \"diffusive_parabolic\"\nscaling = \"parabolic\""),
    );
    let out = dir.path().join("o");
    let base = ["limit-check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert_eq!(code(&run(&base)), 1);
    let mut flagged = base.to_vec();
    flagged.push("--unstable-demo");
    let o = run(&flagged);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("unstable_demo.toml").exists());
}

#[test]
fn homogeneous_and_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = dir.path().join("o");
    let o = run(&["homogeneous", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(out.join("homogeneous.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,f1,f_minus1"));

    let o = run(&["selftest", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().all(|l| l.starts_with("[pass]")));
    assert!(out.join("selftest.toml").exists());
}
