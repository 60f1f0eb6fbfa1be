use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_splearn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn splearn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn complete_graph(n: usize) -> String {
    let mut s = format!("n {n}\n");
    for u in 0..n {
        for v in u + 1..n {
            s.push_str(&format!("{u} {v}\n"));
        }
    }
    s
}

fn chain(n: usize) -> String {
    let mut s = format!("# chain\nn {n}\n");
    for v in 1..n {
        s.push_str(&format!("{} {v}\n", v - 1));
    }
    s
}

fn bases(out: &str) -> Vec<&str> {
    out.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect()
}

const TABLE_I: [&str; 9] = ["XXXX", "XYYY", "XZZZ", "YXZY", "YYXZ", "YZYX", "ZXYZ", "ZYZX", "ZZXY"];

#[test]
fn schedule_k4_auto_is_table_i() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "k4.txt", &complete_graph(4));
    let o = run(&["schedule", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(bases(&out), TABLE_I);
    assert!(out.contains("exact: true"));
}

#[test]
fn schedule_k10_knlog_and_chain() {
    let dir = TempDir::new().unwrap();
    let k10 = write(dir.path(), "k10.txt", &complete_graph(10));
    let o = run(&["schedule", k10.to_str().unwrap(), "--construction", "knlog", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 10);
    assert_eq!(v["bases"].as_array().unwrap().len(), 21);
    assert_eq!(v["covered"], true);
    assert_eq!(v["construction"], "knlog");

    let c = write(dir.path(), "chain.txt", &chain(100));
    let o = run(&["schedule", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(bases(&stdout(&o)).len(), 9);
}

#[test]
fn schedule_input_errors() {
    let dir = TempDir::new().unwrap();
    let edgeless = write(dir.path(), "e.txt", "n 3\n");
    assert_eq!(run(&["schedule", edgeless.to_str().unwrap()]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.txt", "n 3\n0 7\n");
    let o = run(&["schedule", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&["schedule", "/nonexistent/graph"]).status.code(), Some(2));
    let k5 = write(dir.path(), "k5.txt", &complete_graph(5));
    assert_eq!(run(&["schedule", k5.to_str().unwrap(), "--construction", "table9"]).status.code(), Some(2));
}

#[test]
fn schedule_out_dir_writes_manifest_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "k6.txt", &complete_graph(6));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["schedule", g.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["schedule.txt", "schedule.json", "manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "schedule");
    assert_eq!(manifest["outputs"], serde_json::json!(["schedule.txt", "schedule.json"]));
    assert_eq!(bases(&fs::read_to_string(a.join("schedule.txt")).unwrap()).len(), 15);
    // No temp files left behind.
    assert_eq!(fs::read_dir(&a).unwrap().count(), 3);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "k4.txt", &complete_graph(4));
    let full = write(dir.path(), "full.txt", &(TABLE_I.join("\n") + "\n"));
    assert_eq!(run(&["verify", g.to_str().unwrap(), full.to_str().unwrap()]).status.code(), Some(0));

    let short = write(dir.path(), "short.txt", &(TABLE_I[..8].join("\n") + "\n"));
    let o = run(&["verify", g.to_str().unwrap(), short.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("edge (")).count(), 6);

    let with_i = write(dir.path(), "i.txt", "XXXI\nXYYY\n");
    assert_eq!(run(&["verify", g.to_str().unwrap(), with_i.to_str().unwrap()]).status.code(), Some(2));

    let narrow = write(dir.path(), "narrow.txt", "XXX\nYYY\n");
    assert_eq!(run(&["verify", g.to_str().unwrap(), narrow.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_accepts_json_export() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "k7.txt", &complete_graph(7));
    let o = run(&["schedule", g.to_str().unwrap(), "--format", "json"]);
    let s = write(dir.path(), "s.json", &stdout(&o));
    let o = run(&["verify", g.to_str().unwrap(), s.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["covered"], true);
    assert_eq!(v["bases"], 21);
}

#[test]
fn simulate_fit_noiseless_k4() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "k4.txt", &complete_graph(4));
    let out = dir.path().join("run");
    let o = run(&[
        "simulate-fit",
        g.to_str().unwrap(),
        "--random",
        "7",
        "--infinite-shots",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert!(summary["max_abs_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(summary["rank"], 66);
    let fit: serde_json::Value = serde_json::from_slice(&fs::read(out.join("fit.json")).unwrap()).unwrap();
    assert_eq!(fit["lambda"].as_object().unwrap().len(), 66);
    assert_eq!(fit["fidelities"].as_object().unwrap().len(), 66);
    let csv = fs::read_to_string(out.join("curves.csv")).unwrap();
    assert!(csv.starts_with("observable,depth,estimate,shots\n"));
    assert_eq!(csv.lines().count(), 1 + 66 * 4);
}

#[test]
fn simulate_fit_zero_model_and_reproducibility() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "k4.txt", &complete_graph(4));
    let terms: Vec<String> = ["XIII", "IYII", "ZZII"].iter().map(|p| format!(r#"{{"pauli":"{p}","lambda":0.0}}"#)).collect();
    let model = write(dir.path(), "zero.json", &format!(r#"{{"n":4,"terms":[{}]}}"#, terms.join(",")));
    let o = run(&["simulate-fit", g.to_str().unwrap(), "--model", model.to_str().unwrap(), "--shots", "500", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let fit: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(fit["lambda"].as_object().unwrap().values().all(|v| v.as_f64() == Some(0.0)));

    let args = ["simulate-fit", g.to_str().unwrap(), "--random", "3", "--shots", "2000", "--seed", "9", "--depths", "2,4,16", "--format", "csv"];
    assert_eq!(run(&args).stdout, run(&args).stdout);

    let neg = write(dir.path(), "neg.json", r#"{"n":4,"terms":[{"pauli":"XIII","lambda":-1.0}]}"#);
    assert_eq!(run(&["simulate-fit", g.to_str().unwrap(), "--model", neg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["simulate-fit", g.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate-fit", g.to_str().unwrap(), "--random", "1", "--depths", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn explore_reports() {
    let dir = TempDir::new().unwrap();
    let k4 = write(dir.path(), "k4.txt", &complete_graph(4));
    let o = run(&["explore", k4.to_str().unwrap(), "--seed", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["best"], 9);
    assert_eq!(v["lower_bound"], 9);

    let k5 = write(dir.path(), "k5.txt", &complete_graph(5));
    let args = ["explore", k5.to_str().unwrap(), "--seed", "11", "--budget", "50000", "--format", "json"];
    let first: serde_json::Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    let second: serde_json::Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    assert_eq!(first, second);
    let best = first["best"].as_u64().unwrap();
    assert!((9..=15).contains(&best));

    let c = write(dir.path(), "c.txt", &chain(12));
    let out = dir.path().join("x");
    let o = run(&["explore", c.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# best: 9"));
    for f in ["best_schedule.txt", "best_schedule.json", "search_log.jsonl", "summary.json", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn formula_command() {
    let o = run(&["formula", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("9"));
    assert_eq!(stdout(&run(&["formula", "10"])).lines().next(), Some("21"));
    assert_eq!(run(&["formula", "3"]).status.code(), Some(2));
}
