use std::path::Path;
use std::process::{Command, Output};

fn xp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xp")).args(args).current_dir(dir).output().expect("xp runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = xp(args, dir);
    assert!(out.status.success(), "xp {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn gen_then_path_and_spectral() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let summary = json(&ok(&["gen", "--model", "regular", "--n", "500", "--d", "3", "--seed", "4", "--out", "g.txt"], d));
    assert_eq!(summary["m"], 750);
    assert_eq!(summary["regular_degree"], 3);
    ok(&["gen", "--model", "margulis", "--m", "10", "--out", "m.bin"], d);
    assert!(std::fs::read(d.join("m.bin")).unwrap().starts_with(b"XPGR"));

    let bibfs = json(&ok(&["path", "--graph", "g.txt", "--s", "0", "--t", "499"], d));
    let bfs = json(&ok(&["path", "--algo", "bfs", "--graph", "g.txt", "--s", "0", "--t", "499"], d));
    assert_eq!(bibfs["status"], "found");
    assert_eq!(bibfs["path"].as_array().unwrap().len(), bfs["path"].as_array().unwrap().len());
    assert!(bibfs["visited_count"].as_u64() <= bfs["visited_count"].as_u64());

    let walks = json(&ok(
        &["path", "--algo", "bfswalks", "--graph", "g.txt", "--s", "1", "--t", "2", "--lambda", "2.83", "--allow-weak-expansion"],
        d,
    ));
    assert!(walks["query_count"].as_u64().unwrap() > 0);

    let report = json(&ok(&["spectral", "--graph", "g.txt"], d));
    assert_eq!(report["method"], "exact");
    assert!(report["lambda_est"].as_f64().unwrap() < 3.0);
    let mg = json(&ok(&["spectral", "--margulis", "8", "--method", "exact"], d));
    assert!(mg["lambda_est"].as_f64().unwrap() < 8.0);
}

#[test]
fn bounds_rows_have_non_negative_slack() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen", "--model", "regular", "--n", "200", "--d", "4", "--seed", "2", "--out", "g.txt"], d);
    let (header, rows) = csv_rows(&ok(&["bounds", "--graph", "g.txt", "--sources", "3", "--sets", "2"], d));
    assert_eq!(header, ["bound", "source", "k", "set_size", "bound_value", "empirical", "slack"]);
    for kind in ["far_nodes", "mixing", "confined_walks_ln"] {
        assert!(rows.iter().any(|r| r[0] == kind), "no {kind} rows");
    }
    for r in &rows {
        let slack: f64 = r[6].parse().unwrap();
        assert!(slack >= -1e-9, "{r:?}");
    }
}

#[test]
fn game_table_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["game", "--model", "regular", "--n", "400", "--strategy", "random-probe", "--budgets", "0,20,400", "--trials", "30", "--seed", "5"];
    let a = ok(&args, dir.path());
    assert_eq!(a, ok(&args, dir.path()));
    let (header, rows) = csv_rows(&a);
    assert_eq!(&header[..4], ["budget", "success_rate", "connected_rate", "mean_edges_discovered"]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1], "0.0");
    assert_eq!(rows[2][1], "1.0");
}

#[test]
fn exp_flags_override_config_and_csv_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("c.toml"), "experiment = \"bibfs-scaling\"\nn_grid = [128, 256]\npairs = 50\nseed = 3\ntiming = false\n").unwrap();
    let first = json(&ok(&["exp", "--config", "c.toml", "--pairs", "7", "--output", "a.csv"], d));
    assert_eq!(first["config"]["pairs"], 7);
    assert_eq!(first["row_count"], 2);
    assert!(first["slope"].is_number());
    ok(&["exp", "--config", "c.toml", "--pairs", "7", "--output", "b.csv"], d);
    let (a, b) = (std::fs::read_to_string(d.join("a.csv")).unwrap(), std::fs::read_to_string(d.join("b.csv")).unwrap());
    assert_eq!(a.replace("a.csv", "b.csv"), b);
    assert!(a.lines().any(|l| l == "# pairs = 7"));

    let plot = json(&ok(&["plot", "--csv", "a.csv"], d));
    assert_eq!(plot["schema"], "scaling");
    assert!(d.join("a.py").exists());
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.toml"), "experiment = \"bibfs-scaling\"\nn_grid = [256, 128]\n").unwrap();
    std::fs::write(d.join("typo.toml"), "experiment = \"bibfs-scaling\"\nn_grid = [128]\nparis = 3\n").unwrap();
    std::fs::write(d.join("empty.csv"), "").unwrap();
    for args in [
        &["exp", "--config", "bad.toml"][..],
        &["exp", "--config", "typo.toml"],
        &["exp", "--experiment", "lower-bound", "--n-grid", "100", "--trials", "0"],
        &["exp", "--n-grid", "100"],
        &["plot", "--csv", "empty.csv"],
        &["gen", "--model", "er", "--n", "10", "--out", "x.txt"],
        &["game", "--model", "er", "--n", "10", "--budgets", "1", "--strategy", "nope"],
    ] {
        assert_eq!(xp(args, d).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(xp(&["path", "--graph", "missing.txt", "--s", "0", "--t", "1"], d).status.code(), Some(1));
}
