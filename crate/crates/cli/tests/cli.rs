use std::fs;
use std::process::{Command, Output};

fn karamata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_karamata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_writes_report_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"scenario": "holder_power", "params": {"gamma": 0.5}, "stop": {"max_iter": 2000}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = karamata(&["solve", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["scenario"], "holder_power(0.5)");
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.starts_with("k,dist,residual,bound,profile\n"));
    assert!(csv.lines().count() > 100);
    for series in ["dist", "residual", "bound", "profile"] {
        assert!(out.join(format!("{series}.dat")).exists(), "{series}.dat");
    }
}

#[test]
fn bad_configs_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"scenario": "nope"}"#,
        r#"{"scenario": "holder_lines", "params": {"kappa": 1}}"#,
        r#"{"scenario": "holder_lines", "x0": [1, 2, 3]}"#,
        r#"{"scenario": "holder_lines", "colour": "red"}"#,
        r#"{"scenario": "dr_gamma", "x0": [0.6, -0.2]}"#,
        "not json",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = dir.path().join(format!("{i}.json"));
        fs::write(&cfg, text).unwrap();
        let o = karamata(&["solve", "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
    let o = karamata(&["solve", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(karamata(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn project_subcommand() {
    let o = karamata(&["project", "--set", "exp_cone", "--point", "0,1,3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0,1,3");
    let o = karamata(&["project", "--set", "dr_fix_ray", "--point", "-2,-1"]);
    assert_eq!(stdout(&o).trim(), "0,0");
    let o = karamata(&["project", "--set", r#"{"kind": "halfspace", "normal": [1, 0], "offset": 0.5}"#, "--point", "2,7"]);
    assert_eq!(stdout(&o).trim(), "0.5,7");
    let o = karamata(&["project", "--set", "exp_cone", "--point", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = karamata(&["project", "--set", "hexagon", "--point", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rv_index_from_catalog_and_table() {
    let o = karamata(&["rv-index", "--function", "power(0.3)"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["index"].as_f64().unwrap() - 0.3).abs() < 0.02, "{v}");

    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("f.csv");
    let rows: String = (0..400)
        .map(|j| {
            let t = 0.1 * 0.5f64.powf(j as f64 / 4.0);
            format!("{t:e},{:e}\n", t.powf(0.6))
        })
        .collect();
    fs::write(&table, rows).unwrap();
    let o = karamata(&["rv-index", "--function", table.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["index"].as_f64().unwrap() - 0.6).abs() < 0.02, "{v}");

    assert_eq!(karamata(&["rv-index", "--function", "mystery"]).status.code(), Some(2));
}

#[test]
fn predict_tabulates_a_decreasing_bound() {
    let o = karamata(&["predict", "--psi", "power(0.5)", "--s", "2", "--d0", "0.3", "--k-max", "1000000"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,bound"));
    let bounds: Vec<f64> = lines
        .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
        .collect();
    assert!(bounds.len() > 10);
    assert!(bounds.windows(2).all(|w| w[1] <= w[0]));
    assert!(String::from_utf8_lossy(&o.stderr).contains("regime"));
    let o = karamata(&["predict", "--psi", "power(0.5)", "--d0", "-1", "--k-max", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_rejects_malformed_params() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for p in ["theta", "theta=abc", "gamma=0.5"] {
        let o = karamata(&["bench", "holder_lines", "--param", p, "--out", out]);
        assert_eq!(o.status.code(), Some(2), "{p}");
    }
}
