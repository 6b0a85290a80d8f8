//! The `hetnet` binary end to end: exit codes and output files.

use std::fs;
use std::path::Path;
use std::process::Command;

fn hetnet(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hetnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn run_writes_csvs_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let scen = write(dir.path(), "s.toml", "topology = \"coe\"\nn_users = 50\nslots = 4\nn_hotspot = 10\n");
    let out = dir.path().join("out");
    let o = hetnet(&[
        "run", "--scenario", &scen, "--out", out.to_str().unwrap(),
        "--trace-users", "--trace-picos", "--set", "realizations=2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let slots = fs::read_to_string(out.join("slots.csv")).unwrap();
    assert!(slots.starts_with(
        "slot,n_active_picos,macro_active_users,pico_active_users,capacity_bps,power_w,ee_bits_per_joule\n"
    ));
    assert_eq!(slots.lines().count(), 5);
    let users = fs::read_to_string(out.join("users.csv")).unwrap();
    assert!(users.starts_with("user_id,kind,mean_rate_bps,frac_slots_on_pico\n"));
    assert_eq!(users.lines().count(), 51);
    let tu = fs::read_to_string(out.join("trace_users.csv")).unwrap();
    assert!(tu.starts_with("slot,user_id,x,y,active,serving_cell\n"));
    assert_eq!(tu.lines().count(), 1 + 4 * 50);
    let tp = fs::read_to_string(out.join("trace_picos.csv")).unwrap();
    assert!(tp.starts_with("slot,pico_id,mode\n"));
    assert_eq!(tp.lines().count(), 1 + 4 * 28);
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "policy = { t_activate = 5, t_deactivate = 5 }\n");
    let o = hetnet(&["run", "--scenario", &bad, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("policy.t_deactivate"));

    let typo = write(dir.path(), "typo.toml", "n_user = 3\n");
    assert_eq!(hetnet(&["run", "--scenario", &typo]).status.code(), Some(1));

    let ok = write(dir.path(), "ok.toml", "slots = 1\n");
    let o = hetnet(&["run", "--scenario", &ok, "--set", "n_hotspot=5000"]);
    assert_eq!(o.status.code(), Some(1));

    assert_eq!(hetnet(&["preset", "bogus"]).status.code(), Some(1));
}

#[test]
fn runtime_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let o = hetnet(&["run", "--scenario", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let scen = write(
        dir.path(),
        "s.toml",
        "topology = \"udc\"\nslots = 1\nrealizations = 3\nboot_duration = 0\npolicy = { threshold = 0 }\n",
    );
    let out = dir.path().join("sw");
    let o = hetnet(&[
        "sweep", "--scenario", &scen, "--param", "policy.t_activate",
        "--from", "0", "--to", "20", "--step", "5", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "threshold,topology,ee_mean,ee_std,capacity_mean,power_mean");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0.0,udc,") || lines[1].starts_with("0,udc,"));
}

#[test]
fn dump_topology_emits_layout() {
    let dir = tempfile::tempdir().unwrap();
    let scen = write(dir.path(), "s.toml", "topology = \"coe\"\n");
    let o = hetnet(&["dump-topology", "--scenario", &scen]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "coe");
    assert_eq!(v["picos"].as_array().unwrap().len(), 28);
    assert_eq!(v["macro"]["r"], 500.0);
}
