use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinsqueeze")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn ket_rows_and_top_coefficient() {
    let o = run(&["ket", "--k", "30", "--mu", "0.75,0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,re,im\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 31);
    assert_eq!(r[30][0], "30");
    assert_eq!(r[30][1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn ket_with_zero_mu_is_one_hot() {
    let r = rows(&stdout(&run(&["ket", "--k", "30", "--mu", "0,0"])));
    for (n, row) in r.iter().enumerate() {
        let re: f64 = row[1].parse().unwrap();
        let im: f64 = row[2].parse().unwrap();
        assert_eq!((re, im), if n == 30 { (1.0, 0.0) } else { (0.0, 0.0) });
    }
}

#[test]
fn normalized_ket_file_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ket.csv");
    let o = run(&["ket", "--k", "30", "--mu", "0.75,0", "--normalize", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let total: f64 = rows(&read(&path))
        .iter()
        .map(|r| r[1].parse::<f64>().unwrap().powi(2) + r[2].parse::<f64>().unwrap().powi(2))
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
    let side: serde_json::Value = serde_json::from_str(&read(&dir.path().join("ket.json"))).unwrap();
    assert_eq!(side, serde_json::json!({"k": 30, "normalized": true}));
}

#[test]
fn bad_mu_is_a_config_error() {
    let o = run(&["ket", "--k", "30", "--mu", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("config"));
    assert_eq!(run(&["ket", "--mu", "0.1,0"]).status.code(), Some(2));
}

#[test]
fn husimi_grid() {
    let o = run(&["husimi", "--k", "10", "--mu", "0,0", "--grid", "-1:1:5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("re_zeta,im_zeta,value\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 25);
    let values: Vec<f64> = r.iter().map(|row| row[2].parse().unwrap()).collect();
    assert!(values.iter().all(|&v| v >= 0.0));
    let peak = values.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(values[12], peak);
    assert_eq!((r[12][0].parse::<f64>().unwrap(), r[12][1].parse::<f64>().unwrap()), (0.0, 0.0));
}

#[test]
fn compare_at_k30_t1_2() {
    let o = run(&["compare", "--k", "30", "--t", "1.2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = v["l2_difference"].as_f64().unwrap();
    assert!((d - 0.0147).abs() < 5e-4, "{d}");
}

#[test]
fn compare_writes_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("cmp");
    let o = run(&["compare", "--k", "30", "--t", "1.2", "--states", prefix.to_str().unwrap()]);
    assert!(o.status.success());
    for name in ["cmp.quantum.csv", "cmp.semiclassical.csv", "cmp.quantum.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn norm_scan_rows() {
    let o = run(&["norm-scan", "--mu", "0.75,0", "--k-list", "50,100,200"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("k,reduced_norm_sqr,reduced_ratio,ket_norm_sqr,ket_ratio\n"));
    assert_eq!(rows(&text).len(), 3);
}

#[test]
fn propagate_for_zero_time_returns_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    assert!(run(&["ket", "--k", "12", "--mu", "0.3,0.2", "--normalize", "--out", input.to_str().unwrap()]).status.success());
    let o = run(&["propagate", "--t", "0", "--state", input.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), read(&input));
}

#[test]
fn propagate_trajectory_csv() {
    let o = run(&["propagate", "--t", "1", "--step", "0.01"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("t,re_mu,im_mu,re_nu,im_nu,delta\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 101);
    let im_mu: f64 = r[100][2].parse().unwrap();
    assert!((im_mu + 0.5f64.tanh()).abs() < 1e-8);
}

#[test]
fn disk_exit_is_a_numerical_failure() {
    let o = run(&["propagate", "--t", "30"]);
    assert_eq!(o.status.code(), Some(3));
    let diag: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(diag["error"], "numerical");
    assert!(diag["kappa"].as_f64().unwrap() > 0.99);
}

#[test]
fn reduce_agrees_with_quadrature_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"k": 12, "A": [[[0.1, 0], [0.2, 0]], [[0.2, 0], [0.3, 0.1]]], "z": [[0.6, 0], [0, 0.8]]}"#,
    )
    .unwrap();
    let o = run(&["reduce", "--config", cfg.to_str().unwrap(), "--quadrature"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["relative_difference"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["k"], 12);
    std::fs::write(&cfg, r#"{"k": 12, "unknown": 1}"#).unwrap();
    assert_eq!(run(&["reduce", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn symbol_of_diagonal_matrix() {
    let o = run(&["symbol", "--matrix", "[[[0.5,0],[0,0]],[[0,0],[0.25,0]]]"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mu = v["matrix"][0][0][0].as_f64().unwrap();
    assert!((mu - 0.25).abs() < 1e-15);
    let pre = v["prefactor"][0].as_f64().unwrap();
    assert!((pre - (2.0 * std::f64::consts::PI * 1.5).sqrt().recip()).abs() < 1e-15);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["husimi", "--k", "10", "--mu", "0.25,0.5", "--grid", "-2:2:9"]);
    let b = run(&["husimi", "--k", "10", "--mu", "0.25,0.5", "--grid", "-2:2:9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_core_and_mutation() {
    let o = run(&["validate", "--suite", "core"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let keys: Vec<&str> = v["checks"][0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["bound", "detail", "id", "measured", "name", "passed", "suite"]);

    let o = run(&["validate", "--suite", "core", "--l3-scale", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["spin operator commutator"]);
}
