//! End-to-end runs of the `hris` binary.

use std::path::Path;
use std::process::{Command, Output};

use hris_experiments::output::strip_wall_time;

const SMALL: &str = r#"
seed = 3
trials = 50

[scenario]
bs_antennas = 2
elements = 4
rf_chains = 2
users = 2
slots_per_subframe = 2
subframes = 4
gamma_db = 20.0

[scenario.channel]
beta = 1.0
gammas = [1.0]

[optimizer]
max_iter = 20

[sweeps]
rho_grid = [0.2, 0.5, 0.8]
pilot_grid = [4, 8]
rfchain_grid = [1, 2]
convergence_inits = 2
"#;

fn hris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hris")).args(args).output().expect("run hris")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn printed_paths(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout).lines().map(str::to_owned).collect()
}

#[test]
fn sweeps_write_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out_arg = out_dir.to_string_lossy().into_owned();
    for sweep in ["rho-sweep", "convergence", "curves"] {
        let out = hris(&[sweep, "--config", &config, "--out", &out_arg, "--json"]);
        assert!(out.status.success(), "{sweep}: {}", String::from_utf8_lossy(&out.stderr));
        let paths = printed_paths(&out);
        assert!(paths.iter().any(|p| p.ends_with(".csv")), "{sweep}: {paths:?}");
        assert!(paths.iter().any(|p| p.ends_with(".json")), "{sweep}: {paths:?}");
        for p in &paths {
            assert!(Path::new(p).starts_with(&out_dir));
            let text = std::fs::read_to_string(p).unwrap();
            assert!(!text.is_empty());
        }
    }
}

#[test]
fn same_seed_gives_identical_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let mut bodies = Vec::new();
    for run in ["a", "b"] {
        let out_arg = dir.path().join(run).to_string_lossy().into_owned();
        let out = hris(&["rho-sweep", "--config", &config, "--out", &out_arg, "--seed", "5"]);
        assert!(out.status.success());
        let csv = printed_paths(&out).into_iter().find(|p| p.ends_with(".csv")).unwrap();
        bodies.push(strip_wall_time(&std::fs::read_to_string(csv).unwrap()));
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn validate_breach_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{SMALL}\n[validate]\ng_tolerance = 1e-12\n");
    let config = write_config(dir.path(), &text);
    let out_arg = dir.path().join("out").to_string_lossy().into_owned();
    let out = hris(&["validate", "--config", &config, "--out", &out_arg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance breach"));
}

#[test]
fn missing_output_dir_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = hris(&["rho-sweep", "--config", &config]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("output directory"));
}

#[test]
fn bad_config_path_is_an_error() {
    let out = hris(&["curves", "--config", "/nonexistent/config.toml", "--out", "/tmp"]);
    assert_eq!(out.status.code(), Some(1));
}
