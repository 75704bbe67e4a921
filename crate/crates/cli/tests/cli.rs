use std::path::Path;
use std::process::{Command, Output};

fn hypmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypmax")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn region_file_has_header_anchors_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let o = hypmax(&["regions", "--n", "3", "--grid", "512", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# hypmax "));
    assert_eq!(lines[1], "# command: regions");
    assert!(lines[2].starts_with("# config: ") && lines[2].contains("grid: 512"));
    assert!(text.contains("# anchor B inv_p=0.5 alpha=-0.5\n"));
    assert!(text.contains("# anchor C inv_p=0.25 alpha=-0.3125\n"));
    let rows = hypmax::regions::read_region_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 512);
    assert_eq!(rows[128].inv_p, 0.25);
    assert_eq!(rows[128].new_sufficient, -0.3125);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let args = ["mean", "--n", "3", "--alpha", "0.5", "--t", "1", "--r", "0:1:3"];
    let a = hypmax(&args);
    let b = hypmax(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "t,z_r,value_re,value_im");
    assert_eq!(data.len(), 4);
}

#[test]
fn classification_verdict_is_versioned_json() {
    let o = hypmax(&["regions", "--n", "3", "--classify-p", "4", "--alpha", "-0.6"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "hypmax.verdict/1");
    assert_eq!(v["status"], "PROVEN_UNBOUNDED");
    assert_eq!(v["n"], 3);
    assert!(v["binding_constraint"].as_str().unwrap().starts_with("necessary"));
    assert_eq!(v["header"]["command"], "regions");
}

#[test]
fn shell_sweep_reports_its_slope() {
    let o = hypmax(&[
        "counterexample",
        "--family",
        "h_eps",
        "--n",
        "2",
        "--alpha",
        "0.2",
        "--p",
        "4",
        "--sweep",
        "1e-1:1e-3",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], "hypmax.counterexample/1");
    let slope = v["summary"]["fit"]["slope"].as_f64().unwrap();
    assert!((slope + 0.45).abs() < 0.1, "slope {slope}");
    assert_eq!(v["samples"].as_array().unwrap().len(), 7);
}

#[test]
fn dyadic_rows() {
    let o = hypmax(&[
        "multiplier",
        "--n",
        "3",
        "--alpha",
        "0.5",
        "--t",
        "12",
        "--dyadic",
        "3:5",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "j,sup");
    assert!(data[1].starts_with("3,"));
    assert_eq!(data.len(), 4);
}

#[test]
fn validate_passes_and_reports_each_check() {
    let o = hypmax(&[
        "validate", "--suite", "primary", "--only", "2,3,8,10", "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], hypmax::validate::REPORT_SCHEMA);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS [")).count(), 4);
}

#[test]
fn failing_check_exits_with_one() {
    // a slope window this short cannot resolve the decay rate
    let o = hypmax(&[
        "asymptotics",
        "--check",
        "oscillatory",
        "--n",
        "3",
        "--alpha",
        "0",
        "--t",
        "1",
        "--lo",
        "1",
        "--hi",
        "2",
    ]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&hypmax(&["frobnicate"])), 2);
    assert_eq!(code(&hypmax(&["regions", "--n", "1"])), 2);
    assert_eq!(code(&hypmax(&["mean", "--bogus", "1"])), 2);
    assert_eq!(code(&hypmax(&["validate", "--only", "11"])), 2);
    assert_eq!(code(&hypmax(&["mean", "--alpha", "-0.5", "--route", "direct"])), 2);
    let unwritable = hypmax(&["regions", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&unwritable), 2);
    assert_eq!(code(&hypmax(&["--config", "/nonexistent.cfg", "regions"])), 2);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.cfg",
        "# region map\ncommand = regions\nn = 3\ngrid = 4\n",
    );
    let from_file = stdout(&hypmax(&["--config", &cfg]));
    assert!(from_file.contains("n: 3, grid: 4"), "{from_file}");
    let overridden = stdout(&hypmax(&["--config", &cfg, "regions", "--n", "2"]));
    assert!(overridden.contains("n: 2, grid: 4"), "{overridden}");
    assert!(overridden.contains("# n = 2, p_n = 4"));

    let bad = write(dir.path(), "bad.cfg", "n = 3\ngrid 4\n");
    let o = hypmax(&["regions", "--config", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.cfg:2:"));
    let unknown = write(dir.path(), "unknown.cfg", "n = 3\nwidth = 2\n");
    let o = hypmax(&["regions", "--config", &unknown]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown.cfg:2:"));
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_hypmax"))
        .args(["regions", "--grid", "4"])
        .env("HYPMAX_THREADS", "none")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let ok = Command::new(env!("CARGO_BIN_EXE_hypmax"))
        .args(["regions", "--grid", "4"])
        .env("HYPMAX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&ok), 0);
}
