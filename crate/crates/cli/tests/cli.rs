use std::path::Path;
use std::process::{Command, Output};

fn skyreach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skyreach")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Second line of a two-line CSV, split into fields.
fn data_row(o: &Output) -> Vec<String> {
    stdout(o).lines().nth(1).expect("data row").split(',').map(str::to_owned).collect()
}

#[test]
fn snr_pure_link_budget() {
    // Overhead user, single element, tilt 90: only the budget terms remain.
    let o = skyreach(&["snr", "--ports", "1", "--elements", "1", "--range", "1000", "--height", "0", "--freq", "2e9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let row = data_row(&o);
    let snr: f64 = row[8].parse().unwrap();
    let expected = 30.0 + 95.0 + 8.0 + 20.0 * (299_792_458.0 / (4.0 * std::f64::consts::PI * 1000.0 * 2e9)).log10();
    assert!((snr - expected).abs() < 1e-4, "{snr} vs {expected}");
    assert_eq!(row[10], "false");
}

#[test]
fn snr_json_has_null_flag() {
    let o = skyreach(&[
        "snr", "--ports", "4", "--elements", "8", "--range", "5000", "--height", "1000", "--freq", "2e9", "--track", "--json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["is_null"], false);
    assert_eq!(v["tracking"], true);
    assert!(v["snr_db"].is_number());
}

#[test]
fn dimension_far_user() {
    let o = skyreach(&["dimension", "--target", "5", "--range", "300000", "--height", "1000", "--track"]);
    assert!(o.status.success());
    let row = data_row(&o);
    assert_eq!(row[0], "13");
    assert!(row[1].parse::<f64>().unwrap() >= 5.0);
    assert_eq!(row[2], "true");
}

#[test]
fn dimension_json() {
    let o = skyreach(&["dimension", "--target", "5", "--range", "300000", "--height", "1000", "--track", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["min_ports"], 13);
    assert_eq!(v["feasible"], true);
}

#[test]
fn infeasible_exits_three() {
    // h = d puts the user at zenith; with tilt 90 and two elements the kernel nulls.
    let o = skyreach(&[
        "dimension", "--target", "5", "--range", "1000", "--height", "1000", "--tilt", "90", "--elements", "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(data_row(&o)[2], "false");
}

#[test]
fn invalid_inputs_exit_two() {
    let cases: [&[&str]; 4] = [
        &["snr", "--ports", "1", "--elements", "1", "--range", "100", "--height", "500", "--freq", "2e9"],
        &["snr", "--ports", "0", "--elements", "1", "--range", "1000", "--height", "0", "--freq", "2e9"],
        &["dimension", "--target", "5", "--range", "1000", "--height", "10", "--tilt", "70", "--track"],
        &["sweep", "--preset", "fig9", "--out", "x.csv"],
    ];
    for args in cases {
        assert_eq!(skyreach(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_four() {
    let o = skyreach(&["sweep", "--preset", "fig2", "--out", "/nonexistent-dir/fig2.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn sweep_preset_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = skyreach(&["sweep", "--preset", "fig2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = read(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n_elements,theta_deg,pattern_db,array_factor_db,is_null"));
    assert_eq!(lines.count(), 5 * 1801);
    let meta: serde_json::Value = serde_json::from_str(&read(&dir.path().join("fig2.meta.json"))).unwrap();
    assert_eq!(meta["preset"], "fig2");
    assert_eq!(meta["row_count"], 5 * 1801);
}

#[test]
fn sweep_config_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("snr.json");
    std::fs::write(
        &cfg,
        r#"{"metric": "snr", "axes": [{"name": "m_ports", "values": [1, 2]}], "track": true, "range": 3000}"#,
    )
    .unwrap();
    let o = skyreach(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(v["columns"][0], "m_ports");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let gain = rows[1][1].as_f64().unwrap() - rows[0][1].as_f64().unwrap();
    assert!((gain - 10.0 * 2f64.log10()).abs() < 1e-6);
}

#[test]
fn sweep_config_unknown_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"metric": "snr", "axes": [{"name": "m_ports", "values": [1]}], "bogus": 1}"#).unwrap();
    let out = dir.path().join("o.csv");
    let o = skyreach(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn pattern_to_stdout() {
    let o = skyreach(&["pattern", "--tilt", "70", "--elements", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 1801);
    let peak = text
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            Some((f[0].parse::<f64>().ok()?, f[2].parse::<f64>().ok()?))
        })
        .fold((0.0, f64::NEG_INFINITY), |b, p| if p.1 > b.1 { p } else { b });
    assert!((peak.0 - 70.0).abs() < 1e-9, "{peak:?}");
}
