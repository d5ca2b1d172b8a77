use std::fs;
use std::process::{Command, Output};

fn tribo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tribo"))
        .args(args)
        .output()
        .expect("failed to run tribo")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_prefixes() {
    let out = tribo(&["generate", "tribonacci", "14"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "01020100102010\n");

    let out = tribo(&["generate", "mbonacci:2", "8"]);
    assert_eq!(stdout(&out), "01001010\n");
}

#[test]
fn generate_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prefix.txt");
    let out = tribo(&[
        "generate",
        "mbonacci:4",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(path).unwrap(), "0102010301\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        tribo(&["generate", "tribonacci", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tribo(&["generate", "fibonacci", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tribo(&["generate", "mbonacci:1", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tribo(&["rho", "tribonacci", "5", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(tribo(&["discrepancy", "3", "10"]).status.code(), Some(2));
    assert_eq!(
        tribo(&["verify", "--suite", "other"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tribo(&["verify", "--claim", "no_such_claim"]).status.code(),
        Some(2)
    );
}

#[test]
fn rho_table() {
    let out = tribo(&["rho", "tribonacci", "1", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let values: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(
        values.join(" "),
        "3 3 4 3 4 4 4 3 4 4 4 4 4 4 3 4 4 4 4 4 4 4 4 4 4 4 4 3 4 5 5 4 4 4 4 4 5 5 4 4 4 4"
    );
    assert_eq!(
        stdout(&tribo(&["rho", "tribonacci", "30", "30"])),
        "n,rho\n30,5\n"
    );
    assert_eq!(
        stdout(&tribo(&["rho", "tribonacci", "1", "1"])),
        "n,rho\n1,3\n"
    );
}

#[test]
fn saturation_failure_exits_3() {
    let out = tribo(&["rho", "tribonacci", "1", "100", "--max-buffer", "500"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n=97"));

    let out = tribo(&["rho", "tribonacci", "50", "50", "--scan-cap", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn balance_table() {
    let out = tribo(&["balance", "tribonacci", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n,rho,max_imbalance_0,max_imbalance_1,max_imbalance_2\n1,3,1,1,1\n"));
    assert_eq!(text.lines().count(), 301);
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(stderr.contains("global maximum 2"), "{stderr}");

    let out = tribo(&["balance", "mbonacci:5", "1"]);
    assert_eq!(stdout(&out), "n,rho,max_imbalance_0,max_imbalance_1,max_imbalance_2,max_imbalance_3,max_imbalance_4\n1,5,1,1,1,1,1\n");
}

#[test]
fn four_bonacci_witness() {
    let out = tribo(&[
        "witness",
        "mbonacci:4",
        "--letter",
        "1",
        "--max-len",
        "3305",
        "--scan-len",
        "12353",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "letter,length,pos_u,pos_v,count_u,count_v\n1,3305,2663,9048,891,888\n"
    );
}

#[test]
fn discrepancy_table() {
    let out = tribo(&["discrepancy", "2", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,discrepancy"));
    assert_eq!(lines.next(), Some("0,0"));
    assert_eq!(text.lines().count(), 12);
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(stderr.contains("contains the observed range"), "{stderr}");
}

#[test]
fn csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "2")] {
        let out = tribo(&[
            "discrepancy",
            "0",
            "5000",
            "--out",
            path.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let first = stdout(&tribo(&["special", "1", "200", "--threads", "1"]));
    let second = stdout(&tribo(&["special", "1", "200", "--threads", "2"]));
    assert_eq!(first, second);
    assert!(first.starts_with("n,right_special_word,i,j,k,bispecial,rho,rho3_closed_form\n"));
    assert!(first.contains("\n4,010,2,1,0,true,3,true\n"));
}

#[test]
fn zeckendorf_digits() {
    assert_eq!(stdout(&tribo(&["zeckendorf", "6"])), "011\n");
    assert_eq!(stdout(&tribo(&["zeckendorf", "1"])), "1\n");
    assert_eq!(stdout(&tribo(&["zeckendorf", "7"])), "0001\n");
    assert_eq!(stdout(&tribo(&["zeckendorf", "0"])), "\n");
}

#[test]
fn constants_lines() {
    let text = stdout(&tribo(&["constants"]));
    let names: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
    assert_eq!(
        names,
        [
            "beta",
            "abs_alpha",
            "abs_a_alpha",
            "factor_i0",
            "factor_i1",
            "factor_i2"
        ]
    );
    assert!(text.starts_with("beta=1.83928675521\n"));
}

#[test]
fn verify_selected_claims() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = tribo(&[
        "verify",
        "--claim",
        "rho_3914_is_7",
        "--claim",
        "spectral_constants",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["suite"], "paper");
    let claims = report["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 2);
    assert_eq!(claims[0]["claim_id"], "rho_3914_is_7");
    assert_eq!(claims[0]["expected"], "7");
    assert_eq!(claims[0]["status"], "pass");
    for key in ["description", "observed", "runtime_ms"] {
        assert!(claims[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_with_small_buffer_skips() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = tribo(&[
        "verify",
        "--max-buffer",
        "1000",
        "--claim",
        "rho_3914_is_7",
        "--claim",
        "two_balance_2000",
        "--claim",
        "spectral_constants",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    let status: Vec<&str> = report["claims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap())
        .collect();
    assert_eq!(status, ["skipped", "skipped", "pass"]);
}

#[test]
fn verify_lists_every_claim_once() {
    let text = stdout(&tribo(&["verify", "--list"]));
    let mut ids: Vec<&str> = text
        .lines()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert!(ids.contains(&"rho_3914_is_7"));
    let total = ids.len();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), total);
}
