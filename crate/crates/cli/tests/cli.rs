use std::fs;
use std::process::{Command, Output};

fn tracedist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracedist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn predict_page_to_stdout() {
    let o = tracedist(&["predict", "--model", "page", "--n", "10", "--f", "0.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("experiment,n,n_b,f,q,samples,mean_d1"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("predict-page,10,5,0.5,"), "{row}");
    assert!(row.contains("0.568309886184"), "{row}");
    assert!(lines.next().is_none());
}

#[test]
fn combinatorics_table_rows() {
    let o = tracedist(&["combinatorics-table", "--n-max", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("n,k,narayana,even_narayana,catalan"));
    assert!(text.lines().any(|l| l == "4,2,6,2,14"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["predict", "--n", "0"][..],
        &["combinatorics-table", "--n-max", "0"],
        &["sample", "--samples", "1", "--n", "4"],
        &["predict", "--bogus"],
    ] {
        let o = tracedist(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn missing_config_file_exits_with_one() {
    let o = tracedist(&["predict", "--config", "/nonexistent/experiment.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_kind_must_match_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"kind": "syk", "sizes": [10]}"#).unwrap();
    let o = tracedist(&["predict", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kind"));
}

#[test]
fn flags_override_config_and_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let csv = dir.path().join("out.csv");
    let gp = dir.path().join("out.dat");
    fs::write(&cfg, r#"{"kind": "sample-page", "sizes": [4], "samples": 10, "seed": 1}"#).unwrap();
    let o = tracedist(&[
        "sample",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "20",
        "--f",
        "0.5",
        "--out",
        csv.to_str().unwrap(),
        "--gnuplot",
        gp.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("sample-page,4,2,0.5,,20,"), "{row}");
    assert!(fs::read_to_string(&gp).unwrap().contains("# sample-page N=4"));
}

#[test]
fn output_is_independent_of_worker_count() {
    let run = |workers: &str| {
        let o = tracedist(&[
            "sample", "--ensemble", "charge", "--n", "6", "--samples", "40", "--seed", "7", "--workers", workers,
        ]);
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn seed_changes_sampled_values() {
    let run = |seed: &str| {
        stdout(&tracedist(&["sample", "--n", "4", "--samples", "10", "--f", "0.5", "--seed", seed]))
    };
    assert_ne!(run("1"), run("2"));
    assert_eq!(run("1"), run("1"));
}
