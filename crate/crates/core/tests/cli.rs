use std::process::{Command, Output};

fn pellrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellrank")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    pellrank(args).status.code().unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = pellrank(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["certify", "--a", "1", "--b", "2", "--m", "3", "--auto-n"]), 0);
    assert_eq!(code(&["certify", "--a", "1", "--b", "2", "--m", "1", "--auto-n"]), 3);
    assert_eq!(code(&["certify", "--a", "2", "--b", "4", "--m", "3", "--auto-n"]), 2);
    assert_eq!(code(&["certify", "--a", "1", "--b", "2", "--m", "3", "--n", "4"]), 2);
    assert_eq!(code(&["certify", "--a", "1", "--b", "2", "--m", "2", "--auto-n"]), 2);
    assert_eq!(code(&["pell", "--d", "4", "--n", "-2"]), 2);
    assert_eq!(code(&["nagao", "--a", "1", "--b", "1", "--m", "1", "--n", "1"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn nonsquare_message() {
    let out = pellrank(&["pell", "--d", "4", "--n", "-2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("D must be nonsquare"));
}

#[test]
fn pell_single_row() {
    let v = json(&["pell", "--d", "3", "--n", "-2", "--k-max", "0"]);
    assert_eq!(v["classes"][0].as_array().unwrap().len(), 1);
    assert_eq!(v["classes"][0][0]["m6"], "1");
}

#[test]
fn certificate_json_shape() {
    let v = json(&["certify", "--a", "1", "--b", "2", "--m", "3", "--auto-n"]);
    assert_eq!(v["verdict"]["status"], "certified");
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
    assert_eq!(v["points"]["R"]["x"], "-9/1");
    let v = json(&["certify", "--a", "1", "--b", "2", "--m", "1", "--auto-n"]);
    assert_eq!(v["verdict"]["status"], "failed");
    assert_eq!(v["verdict"]["kind"], "degenerate");
}

#[test]
fn derive_flags_cofactor() {
    let v = json(&["derive", "G", "--a", "1", "--b", "2"]);
    assert_eq!(v["degree_x"], 8);
    assert!(v["m2_minus_1_removed"].as_u64().unwrap() >= 1);
    let h = json(&["derive", "H", "--a", "3", "--b", "5"]);
    assert_eq!(h["degree_x"], 8);
    assert_eq!(h["polynomial"]["vars"], serde_json::json!(["x", "m"]));
}

#[test]
fn irred_scan_csv() {
    let out = pellrank(&["irred-scan", "--a-max", "2", "--b-max", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1);
    let out = pellrank(&["irred-scan", "--a-max", "3", "--b-max", "5", "--which", "all", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3 * 4);
    assert!(rows.iter().all(|r| r.contains(",irreducible,")));
}

#[test]
fn heights_flags() {
    let v = json(&["heights", "--a", "1", "--b", "2", "--m", "3", "--auto-n", "--tolerance", "0.01"]);
    assert_eq!(v["independent"], true);
    for h in v["heights"].as_array().unwrap() {
        let e: f64 = h["error_bound"].as_str().unwrap().parse().unwrap();
        assert!(e <= 0.01);
    }
    let v = json(&["heights", "--a", "1", "--b", "2", "--m", "3", "--auto-n", "--points", "P,P,Q", "--max-doublings", "5"]);
    assert_eq!(v["independent"], false);
    assert!(code(&["heights", "--a", "1", "--b", "2", "--m", "3", "--auto-n", "--points", "P,X"]) == 2);
}

#[test]
fn nagao_outputs() {
    let v = json(&["nagao", "--a", "1", "--b", "2", "--m", "3", "--auto-n", "--prime-bound", "500", "--trace"]);
    assert_eq!(v["prime_bound"], 500);
    assert!(!v["trace"].as_array().unwrap().is_empty());
    let out = pellrank(&["nagao", "--family", "1", "--t-min", "2", "--t-max", "6", "--prime-bound", "200", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.starts_with("curve_id,a,b,m,n,prime_bound,sum"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn config_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out1 = dir.path().join("a.json");
    let out2 = dir.path().join("b.json");
    let cfg_s = cfg.to_str().unwrap();
    assert_eq!(
        code(&["--save-config", cfg_s, "--out", out1.to_str().unwrap(), "--workers", "2", "pell", "--d", "3", "--n", "-2"]),
        0
    );
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    assert_eq!(saved["subcommand"], "pell");
    assert_eq!(saved["parameters"]["d"], "3");
    assert_eq!(saved["workers"], 2);
    assert_eq!(code(&["--config", cfg_s, "--out", out2.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
}

#[test]
fn shipped_configs_run() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let out = pellrank(&["--config", &format!("{dir}/certify_m41.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("certified: rank >= 3"));
    let out = pellrank(&["--config", &format!("{dir}/nagao_ladder.json"), "--workers", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 8);
}
