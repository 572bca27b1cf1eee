use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mtga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtga")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const SMALL: &str = r#"{
  "name": "cli smoke",
  "solvers": ["mtga", "soea", "mfea"],
  "problem": { "benchmark": "B3" },
  "repetitions": 2,
  "solver": { "population_size": 20, "eval_budget": 2000, "n_t": 8 }
}"#;

#[test]
fn run_score_plot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = mtga(&["run", "--config", &cfg, "--seed", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("6 runs executed, 0 reused"));
    for f in ["manifest.json", "summary.json", "scores.csv", "traces/mtga_rep001.csv", "plots/score.svg"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["base_seed"], 7);

    let scores = fs::read_to_string(out.join("scores.csv")).unwrap();
    fs::remove_file(out.join("scores.csv")).unwrap();
    let o = mtga(&["score", "--in", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out.join("scores.csv")).unwrap(), scores);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 3);

    fs::remove_dir_all(out.join("plots")).unwrap();
    let o = mtga(&["plot", "--in", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("plots/convergence_T1.svg").exists());
}

#[test]
fn rerun_reuses_finished_traces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    assert_eq!(mtga(&["run", "--config", &cfg, "--out", out_s]).status.code(), Some(0));
    let before = fs::read(out.join("traces/soea_rep000.csv")).unwrap();
    fs::remove_file(out.join("traces/mfea_rep001.csv")).unwrap();
    let o = mtga(&["run", "--config", &cfg, "--out", out_s]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("1 runs executed, 5 reused"));
    assert_eq!(fs::read(out.join("traces/soea_rep000.csv")).unwrap(), before);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    let cases = [
        r#"{ "problem": { "benchmark": "B42" } }"#,
        r#"{ "repetitions": 0 }"#,
        r#"{ "solver": { "population_size": 3 } }"#,
        r#"{ "no_such_field": 1 }"#,
        "not json",
    ];
    for body in cases {
        let cfg = write_config(dir.path(), body);
        let o = mtga(&["run", "--config", &cfg, "--out", out_s]);
        assert_eq!(o.status.code(), Some(1), "{body}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(mtga(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(mtga(&["run"]).status.code(), Some(1));
}

#[test]
fn runtime_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_eq!(mtga(&["score", "--in", empty.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(mtga(&["plot", "--in", empty.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        let cfg = mtga::experiment::load_config(&path).unwrap();
        cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 3);
}
