use std::path::PathBuf;
use std::process::{Command, Output};

use templag_cli::{plan, Config, Experiment, Table};

fn preset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("presets").join(name)
}

fn templag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_templag"))
        .args(args)
        .env_remove("TEMPLAG_QUAD_CAP")
        .output()
        .unwrap()
}

fn experiment_of(path: &PathBuf) -> Experiment {
    let text = std::fs::read_to_string(path).unwrap();
    let name = text
        .lines()
        .find_map(|l| l.trim().strip_prefix("experiment"))
        .and_then(|rest| rest.trim().strip_prefix('='))
        .unwrap()
        .trim()
        .to_string();
    clap::ValueEnum::from_str(&name, false).unwrap()
}

fn run_config(experiment: Experiment, text: &str) -> Table {
    let config = Config::parse(text).unwrap();
    plan(experiment, config).unwrap().execute().unwrap().0
}

fn column(table: &Table, name: &str) -> Vec<f64> {
    let i = table.header.iter().position(|h| *h == name).unwrap();
    table.rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn every_preset_validates() {
    let mut count = 0;
    for entry in std::fs::read_dir(preset("")).unwrap() {
        let path = entry.unwrap().path();
        let experiment = experiment_of(&path);
        let config = Config::load(&path).unwrap();
        assert!(plan(experiment, config).is_ok(), "{}", path.display());
        count += 1;
    }
    assert_eq!(count, 18);
}

#[test]
fn model_preset_runs_on_401_points() {
    let out = templag(&["model-problem", "--config", preset("model-e-sinx.conf").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,u,exact,abs_error"));
    assert_eq!(lines.count(), 401);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("run{i}.csv"))).collect();
    for path in &paths {
        let out = templag(&[
            "half-line",
            "--config",
            preset("half-line-case-i.conf").to_str().unwrap(),
            "--n",
            "12",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
}

#[test]
fn late_config_flag_is_honoured() {
    let out = templag(&["model-problem", "--n", "8", "--config", preset("model-e-sinx.conf").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_errors_exit_2() {
    let model = preset("model-e-sinx.conf");
    let model = model.to_str().unwrap();
    let cases: [(&[&str], &str); 5] = [
        (&["model-problem", "--config", model, "--s", "2.5"], "0 < s < 2"),
        (&["model-problem", "--config", model, "--bogus", "1"], "bogus"),
        (&["half-line", "--nu", "0.05", "--mu", "0.8"], "nu"),
        (&["whole-line", "--mu", "1"], "mu"),
        (&["model-problem", "--source", "case-ii"], "case-ii"),
    ];
    for (args, needle) in cases {
        let out = templag(args);
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn missing_config_file_exits_2() {
    let out = templag(&["model-problem", "--config", "/nonexistent/templag.conf"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_experiment_key_exits_2() {
    let out = templag(&["whole-line", "--config", preset("model-e-sinx.conf").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_quad_cap_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_templag"))
        .args(["model-problem", "--n", "8"])
        .env("TEMPLAG_QUAD_CAP", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TEMPLAG_QUAD_CAP"));
}

#[test]
fn tiny_quad_cap_is_a_numeric_failure() {
    let out = Command::new(env!("CARGO_BIN_EXE_templag"))
        .args(["model-problem", "--n", "8"])
        .env("TEMPLAG_QUAD_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn symmetric_whole_line_stays_even() {
    let table = run_config(
        Experiment::WholeLine,
        "mu = 1.5\nlambda = 2.5\np = 0.5\nn = 12\nh = 1e-3\nt_final = 0.5\ngrid_points = 41\nx_max = 4",
    );
    assert_eq!(table.header, ["t", "x", "u"]);
    let u = column(&table, "u");
    assert_eq!(u.len(), 41);
    let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..u.len() {
        assert!((u[i] - u[u.len() - 1 - i]).abs() <= 1e-10 * scale);
    }
}

#[test]
fn model_convergence_error_decreases() {
    let table = run_config(
        Experiment::Convergence,
        "target = model\ns = 0.7\nlambda = 1\nn_list = 8, 16, 32, 64",
    );
    assert_eq!(table.header, ["label", "N", "error", "fitted_slope"]);
    let err = column(&table, "error");
    assert_eq!(err.len(), 4);
    assert!(err.windows(2).all(|w| w[1] < w[0]), "{err:?}");
    assert!(err[2] < 1e-10);
}

#[test]
fn operator_check_passes() {
    let table = run_config(Experiment::OperatorCheck, "lambda = 1\nn_max = 8");
    let i = table.header.iter().position(|h| *h == "status").unwrap();
    assert!(table.rows.len() >= 8);
    for row in &table.rows {
        assert_eq!(row[i], "PASS", "{row:?}");
    }
}

#[test]
fn half_line_case_i_matches_exact() {
    let table = run_config(
        Experiment::Convergence,
        "target = half-line\nmu = 2/3\nlambda = 2/3\nnu = 1\nn_list = 4, 8\nt_final = 1\nh = 1e-3",
    );
    for e in column(&table, "error") {
        assert!(e < 1e-8, "{e}");
    }
}
