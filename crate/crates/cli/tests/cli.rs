use std::process::{Command, Output};

fn mckay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mckay")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn components_golden() {
    let o = mckay(&["components", "cyclic:3", "-n", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/components_cyclic3_n4.json"))
        .unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn exit_codes() {
    let bad = mckay(&["group", "cyclic:0"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("InvalidParameter"));
    assert_eq!(mckay(&["verify", "--suite", "cyclic", "-l", "2", "-n", "8"]).status.code(), Some(0));
    assert_eq!(mckay(&["--help"]).status.code(), Some(0));
    assert_eq!(mckay(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mckay(&["weight", "cyclic:3", "-d", "1,2"]).status.code(), Some(1));
    assert_eq!(mckay(&["bc", "cyclic:3", "-d", "2,0,0"]).status.code(), Some(1));
    assert_eq!(mckay(&["verify", "--suite", "repspace", "--group", "2I"]).status.code(), Some(1));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(["components", "2I", "-n", "40"])
        .env("MCKAY_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("BudgetExceeded"));
}

#[test]
fn snapshots_round_trip() {
    for args in [
        vec!["group", "bd:3", "--json"],
        vec!["graph", "2T", "--json"],
        vec!["chambers", "cyclic:3", "-n", "2"],
    ] {
        let text = stdout(&mckay(&args));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{args:?}");
    }
    let csv = stdout(&mckay(&["components", "bd:3", "-n", "5", "--csv"]));
    assert!(csv.starts_with("n,d0,d1,d2,d3,d4,d5,wt,dim\n"));
}

#[test]
fn weight_reports_a_valid_witness() {
    let o = mckay(&["weight", "cyclic:3", "-d", "3,4,4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["weight"], 2);
    assert_eq!(v["size"], 11);
    assert_eq!(v["witness_word"].as_array().unwrap().len(), 4);
}
