use std::path::Path;
use std::process::Command;

fn arfima(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_arfima")).args(args).env_remove("ARFIMA_WORKERS").output().unwrap()
}

fn simulate(dir: &Path, n: &str) -> String {
    let path = dir.join("y.csv");
    let out = arfima(&[
        "simulate", "--order", "1d1", "--d", "0.3", "--phi", "0.5", "--theta", "0.5", "--n", n, "--seed", "7", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn simulate_writes_n_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = simulate(dir.path(), "1000");
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 1001);
    assert_eq!(text.lines().next(), Some("value"));
}

#[test]
fn simulate_is_deterministic_and_needs_a_seed() {
    let a = arfima(&["simulate", "--order", "0d0", "--d", "0.2", "--n", "50", "--seed", "3"]);
    let b = arfima(&["simulate", "--order", "0d0", "--d", "0.2", "--n", "50", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let c = arfima(&["simulate", "--order", "0d0", "--d", "0.2", "--n", "50"]);
    assert_eq!(c.status.code(), Some(1));
}

#[test]
fn empty_abc_acceptance_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = simulate(dir.path(), "200");
    let out = arfima(&["fit-abc", "--input", &path, "--order", "0d1", "--q", "1e-9", "--simulations", "10000", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "value\n1\nx\n").unwrap();
    let out = arfima(&["fit-mle", "--input", path.to_str().unwrap(), "--order", "0d0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 3"));
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    std::fs::write(&cfg, "order = \"1d0\"\nd = 0.1\nphi = 0.4\nn = 30\nseed = 5\n").unwrap();
    let a = arfima(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = arfima(&["simulate", "--order", "1d0", "--d", "0.1", "--phi", "0.4", "--n", "30", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    // Command-line flags override the file.
    let c = arfima(&["simulate", "--config", cfg.to_str().unwrap(), "--n", "10"]);
    assert_eq!(String::from_utf8_lossy(&c.stdout).lines().count(), 11);
}

#[test]
fn mcmc_draws_feed_forecast_and_dic() {
    let dir = tempfile::tempdir().unwrap();
    let y = simulate(dir.path(), "200");
    let draws = dir.path().join("draws.json");
    let out = arfima(&[
        "fit-mcmc", "--input", &y, "--order", "0d1", "--iterations", "400", "--thin", "4", "--seed", "2", "-o",
        draws.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let env: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&draws).unwrap()).unwrap();
    assert_eq!(env["meta"]["seed"], 2);
    assert_eq!(env["draws"]["draws"].as_array().unwrap().len(), 100);

    let fc = arfima(&["forecast", "--input", &y, "--draws", draws.to_str().unwrap(), "--horizon", "5", "--seed", "3"]);
    assert_eq!(fc.status.code(), Some(0), "{}", String::from_utf8_lossy(&fc.stderr));
    let text = String::from_utf8(fc.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("step,mean,lb,ub"));
    assert_eq!(text.lines().count(), 6);

    let dic = arfima(&["dic", "--input", &y, "--draws", draws.to_str().unwrap()]);
    assert_eq!(dic.status.code(), Some(0), "{}", String::from_utf8_lossy(&dic.stderr));
    let v: serde_json::Value = serde_json::from_slice(&dic.stdout).unwrap();
    assert!(v["dic"]["dic"].as_f64().unwrap().is_finite());
}

#[test]
fn gnp_transform_of_fixture() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/gnp_synthetic.csv");
    let out = arfima(&["gnp-transform", "--input", fixture, "--column", "gnp_level"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    assert_eq!(v.len(), 308);
    assert!((arfima::stats::variance(&v) - 1.683).abs() < 1e-6);
}
