use std::path::Path;
use std::process::{Command, Output};

fn bspower(args: &[&str]) -> Output {
    bspower_with(args, |_| {})
}

fn bspower_with(args: &[&str], setup: impl FnOnce(&mut Command)) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bspower"));
    cmd.args(args)
        .arg("--log-level")
        .arg("off")
        .env_remove("BSPOWER_CONFIG");
    setup(&mut cmd);
    cmd.output().expect("run bspower")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn eval_prints_full_load() {
    let o = bspower(&["powermodel", "eval"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let json: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(json["total_w"], 1062.0);
    assert!(text
        .lines()
        .any(|l| l.starts_with("total") && l.ends_with("1062 W")));

    let o = bspower(&["powermodel", "eval", "--d", "2", "--chi", "0"]);
    assert!(stdout(&o).contains("648 W"));
}

#[test]
fn component_breakdown_is_reported() {
    let o = bspower(&["powermodel", "eval", "--model", "component", "--d", "2"]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    let parts: f64 = json["breakdown"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[1].as_f64().unwrap())
        .sum();
    let total = json["total_w"].as_f64().unwrap();
    assert!((parts - total).abs() < 1e-6 * total);
}

#[test]
fn compare_writes_one_row_per_rate_and_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("compare.csv");
    let o = bspower(&[
        "compare",
        "--trials",
        "2",
        "--seed",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut reader = csv::Reader::from_path(&out).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "scheme");
    assert_eq!(&headers[2], "mean_supply_w");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 120);
    assert_eq!(&rows[0][0], "ba");
    assert_eq!(&rows[3][0], "prais");
}

#[test]
fn json_output_parses() {
    let o = bspower(&[
        "raps-sim", "--trials", "2", "--seed", "1", "--rates", "1M:2M:2", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let points: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(points.len(), 6);
    assert_eq!(points[2]["scheme"], "raps");
}

#[test]
fn unknown_flag_fails() {
    let o = bspower(&["pc-sweep", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(bspower(&["--help"]).status.success());
}

#[test]
fn bad_config_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "unknown.toml", "[harness]\nbogus = 1\n");
    let o = bspower(&["--config", &unknown, "pc-sweep"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bogus"));

    let invalid = write(dir.path(), "invalid.toml", "[harness]\ntrials = 0\n");
    let o = bspower(&["--config", &invalid, "pc-sweep"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("harness.trials"));

    let channel = write(dir.path(), "channel.toml", "[channel]\nslots = 0\n");
    let o = bspower(&["--config", &channel, "raps-sim"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("channel.slots"));
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "env.toml",
        "[channel]\nusers = 4\n\n[harness]\ntrials = 7\nseed = 99\n",
    );
    let o = bspower_with(&["--dry-run", "pc-sweep"], |cmd| {
        cmd.env("BSPOWER_CONFIG", &path);
    });
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["config"]["scenario"]["users"], 4);
    assert_eq!(json["config"]["trials"], 7);
    assert_eq!(json["config"]["seed"], 99);
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "seed.toml",
        "[harness]\nseed = 99\ntrials = 7\n",
    );
    let o = bspower(&[
        "--config",
        &path,
        "--dry-run",
        "--seed",
        "5",
        "prais-sweep",
        "--trials",
        "3",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["config"]["seed"], 5);
    assert_eq!(json["config"]["trials"], 3);
    assert_eq!(json["command"]["family"], "tdma");
}

#[test]
fn dry_run_computes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let o = bspower(&["--dry-run", "raps-sim", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!out.exists());
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["command"]["family"], "ofdma");
    assert_eq!(json["command"]["rate_points"].as_array().unwrap().len(), 30);
}

#[test]
fn infeasible_sweep_exits_with_two() {
    let o = bspower(&[
        "pc-sweep",
        "--trials",
        "2",
        "--seed",
        "1",
        "--rates",
        "400M:500M:2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().count() == 3);
}

#[test]
fn mixed_families_are_rejected() {
    let o = bspower(&["compare", "--schemes", "pc,raps", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("schemes"));
}

#[test]
fn channel_dump_has_one_row_per_block_and_user() {
    let o = bspower(&["channel", "dump", "--seed", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(reader.records().count(), 10 * 50 * 10 * 2);
}
