use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ffexpand(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffexpand"))
        .current_dir(dir)
        .env_remove("FFEXPAND_CAP_OVERRIDE")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn records(dir: &Path) -> Vec<Value> {
    std::fs::read_to_string(dir.join("results.jsonl"))
        .unwrap_or_default()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn verify_passes_on_small_field() {
    let d = TempDir::new().unwrap();
    let o = ffexpand(d.path(), &["verify", "--field", "3^1", "--kernel", "(a+x)^2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 10);
    let r = records(d.path());
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["experiment"], "verify");
    assert_eq!(r[0]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn malformed_input_exits_3() {
    let d = TempDir::new().unwrap();
    for args in [
        &["verify", "--field", "3", "--kernel", "(a+x"][..],
        &["verify", "--field", "6", "--kernel", "a*x"],
        &["spectrum", "--field", "7", "--method", "magic"],
        &["verify", "--field", "5", "--kernel", "a^2 + x"],
        &["incidence", "--theorem", "4", "--field", "7"],
        &["nonsense"],
    ] {
        let o = ffexpand(d.path(), args);
        assert_eq!(code(&o), 3, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert!(records(d.path()).is_empty());
    assert_eq!(code(&ffexpand(d.path(), &["--help"])), 0);
    assert_eq!(code(&ffexpand(d.path(), &["--version"])), 0);
}

#[test]
fn injected_fault_exits_2() {
    let d = TempDir::new().unwrap();
    let o = ffexpand(d.path(), &["cube-audit", "--field", "5", "--inject-fault", "--no-store"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["report"]["mismatches"].as_u64().unwrap() > 0);
    let o = ffexpand(d.path(), &["cube-audit", "--field", "5", "--no-store"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn reruns_are_byte_identical() {
    let d = TempDir::new().unwrap();
    let runs = [
        vec!["incidence", "--theorem", "3", "--field", "7,9", "--trials", "3", "--seed", "11"],
        vec!["expand", "--field", "7", "--preset", "erdos:k=2", "--trials", "3", "--seed", "5"],
        vec!["spectrum", "--field", "5,7", "--method", "iter", "--seed", "2"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let (csv, json, wide) = (format!("m{i}.csv"), format!("o{i}.json"), format!("w{i}.csv"));
            let mut a = args.clone();
            a.extend(["--csv", &csv, "--out", &json, "--no-store"]);
            assert_eq!(code(&ffexpand(d.path(), &a)), 0, "{a:?}");
            let mut a = args.clone();
            a.extend(["--out", &wide, "--no-store"]);
            assert_eq!(code(&ffexpand(d.path(), &a)), 0, "{a:?}");
            let read = |f: &str| std::fs::read(d.path().join(f)).unwrap();
            outputs.push((read(&csv), read(&json), read(&wide)));
        }
        assert_eq!(outputs[0], outputs[1], "{args:?}");
        assert!(outputs[0].0.starts_with(b"q,kernel,metric,value\n"));
    }
}

#[test]
fn threads_do_not_change_results() {
    let d = TempDir::new().unwrap();
    let base = ["incidence", "--theorem", "2", "--field", "7", "--trials", "2", "--seed", "3", "--no-store"];
    let one = ffexpand(d.path(), &[&base[..], &["--threads", "1"]].concat());
    let four = ffexpand(d.path(), &[&base[..], &["--threads", "4"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn spectrum_sweep_reports_every_field() {
    let d = TempDir::new().unwrap();
    let o = ffexpand(d.path(), &["spectrum", "--field", "5,7,9,11", "--csv", "m.csv", "--out", "s.json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("s.json")).unwrap()).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    for r in reports {
        let q = r["q"].as_f64().unwrap();
        assert!((r["lambda2_abs"].as_f64().unwrap() - q.sqrt()).abs() < 1e-9);
    }
    let max = reports.iter().map(|r| r["ratio_q56"].as_f64().unwrap()).fold(0.0, f64::max);
    assert_eq!(v["summary"]["max_ratio"].as_f64().unwrap(), max);
    assert_eq!(v["summary"]["trend_ok"], true);
    assert_eq!(v["summary"]["lambda1_violations"], 0);
    let csv = std::fs::read_to_string(d.path().join("m.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.contains(",ratio_q56,")).count(), 4);
    assert_eq!(records(d.path()).len(), 1);
}

#[test]
fn sweep_continues_past_invalid_field() {
    let d = TempDir::new().unwrap();
    let o = ffexpand(d.path(), &["spectrum", "--field", "16,7", "--kernel", "(a+x)^3", "--no-store"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 1);
    assert_eq!(v["failures"][0]["field"], "2^4");
    let o = ffexpand(d.path(), &["spectrum", "--field", "16", "--kernel", "(a+x)^3", "--no-store"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn cap_override_changes_limits() {
    let d = TempDir::new().unwrap();
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_ffexpand"));
        c.current_dir(d.path()).args(["spectrum", "--field", "7", "--no-store"]);
        match env {
            Some(e) => c.env("FFEXPAND_CAP_OVERRIDE", e),
            None => c.env_remove("FFEXPAND_CAP_OVERRIDE"),
        };
        c.output().unwrap()
    };
    assert_eq!(code(&run(None)), 0);
    let o = run(Some("graph_q=5"));
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["failures"][0]["reason"].as_str().unwrap().contains("cap"));
    assert_eq!(code(&run(Some("dense_q=4"))), 3);
    assert_eq!(code(&run(Some("graph_q=oops"))), 3);
}

#[test]
fn config_file_round_trip() {
    let d = TempDir::new().unwrap();
    let o = ffexpand(
        d.path(),
        &["curve-sweep", "--field", "5", "--save-config", "c.json", "--out", "a.json", "--no-store"],
    );
    assert_eq!(code(&o), 0);
    let o = ffexpand(d.path(), &["--config", "c.json", "--out", "b.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let read = |f: &str| std::fs::read(d.path().join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    std::fs::write(d.path().join("bad.json"), r#"{"experiment":"curve-sweep","field":["5"],"typo":1}"#).unwrap();
    assert_eq!(code(&ffexpand(d.path(), &["--config", "bad.json"])), 3);
    assert_eq!(code(&ffexpand(d.path(), &["--config", "missing.json"])), 1);
}
