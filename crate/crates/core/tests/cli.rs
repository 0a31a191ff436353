//! End-to-end checks of the command-line front end: exit codes, byte
//! determinism, and round-tripping of every emitted model.

use std::io::Write;
use std::process::Command;

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_richelot3"))
}

fn write_file(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{content}").unwrap();
    f
}

const OCTIC_17: &str =
    r#"{"model":"hyperelliptic","field":{"p":17,"k":1},"f":[-1,0,0,0,0,0,0,0,1]}"#;
const OCTIC_11_PLAIN: &str =
    r#"{"model":"hyperelliptic","field":{"p":11,"k":1},"f":[0,-6,0,11,0,-6,0,1]}"#;

#[test]
fn decompose_is_byte_deterministic_and_thread_independent() {
    let file = write_file(OCTIC_17);
    let a = bin().arg("decompose").arg(file.path()).output().unwrap();
    let b = bin().arg("decompose").arg(file.path()).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let threaded = bin()
        .args(["--threads", "2", "decompose"])
        .arg(file.path())
        .output()
        .unwrap();
    assert_eq!(a.stdout, threaded.stdout);

    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["kinds"], json!(["HYP_SPLIT", "COMPLETE"]));
    assert_eq!(report["certificate_status"], "consistent");

    let pretty = bin()
        .args(["--pretty", "decompose"])
        .arg(file.path())
        .output()
        .unwrap();
    let reparsed: Value = serde_json::from_slice(&pretty.stdout).unwrap();
    assert_eq!(reparsed, report);
}

#[test]
fn census_runs_are_byte_identical_under_a_fixed_seed() {
    let args = ["census", "--p", "11", "--model", "octic", "--samples", "8", "--seed", "5"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let tally: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(tally["sampled"], 8);
    assert_eq!(
        tally["with_long_involution"].as_u64().unwrap(),
        tally["hyp_split"].as_u64().unwrap()
    );
}

#[test]
fn every_emitted_model_revalidates() {
    let file = write_file(OCTIC_17);
    let out = bin().arg("quotients").arg(file.path()).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut emitted: Vec<Value> = vec![v["curve"].clone()];
    for q in v["quotients"].as_array().unwrap() {
        emitted.push(q["elliptic"].clone());
        emitted.push(q["genus_two"].clone());
    }

    let howe = bin()
        .args(["howe", "build", "--p", "11", "--f1", "0,-6,11,-6,1", "--f2", "0,-20,29,-10,1"])
        .output()
        .unwrap();
    assert!(howe.status.success());
    let h: Value = serde_json::from_slice(&howe.stdout).unwrap();
    assert_eq!(h["genus"], 3);
    emitted.push(h["curve"].clone());
    for key in ["e1", "e2", "e3"] {
        emitted.push(h["quotients"][key].clone());
    }

    for model in emitted {
        let file = write_file(&model.to_string());
        let check = bin().arg("validate").arg(file.path()).output().unwrap();
        assert!(check.status.success(), "emitted model failed validate: {model}");
    }
}

#[test]
fn howe_build_reports_genus_one_without_a_pipeline_run() {
    let out = bin()
        .args(["howe", "build", "--p", "11", "--f1", "0,-6,11,-6,1", "--f2", "0,-6,11,-6,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["shared_degree"], 4);
    assert_eq!(v["genus"], 1);
    assert!(v["quotients"].is_null());
}

#[test]
fn exit_codes_separate_input_certificate_and_budget_failures() {
    let missing = bin().args(["decompose", "/no/such/file.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert!(!missing.stderr.is_empty());

    let garbage = write_file("{not json");
    let bad = bin().arg("validate").arg(garbage.path()).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));

    let elliptic = write_file(r#"{"model":"genus1","field":{"p":11,"k":1},"f":[1,1,0,1]}"#);
    let unsupported = bin().arg("decompose").arg(elliptic.path()).output().unwrap();
    assert_eq!(unsupported.status.code(), Some(1));

    let octic = write_file(OCTIC_17);
    let deep = bin().args(["count", "--n", "9"]).arg(octic.path()).output().unwrap();
    assert_eq!(deep.status.code(), Some(3));

    let none = write_file(OCTIC_11_PLAIN);
    let clean = bin().arg("decompose").arg(none.path()).output().unwrap();
    assert_eq!(clean.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&clean.stdout).unwrap();
    assert_eq!(report["kinds"], json!(["NONE"]));

    let usage = bin().arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));

    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn extension_flag_completes_the_conjugate_fixed_point_certificates() {
    let file = write_file(r#"{"model":"hyperelliptic","field":{"p":5,"k":1},"f":[1,0,4,0,0,0,1,0,1]}"#);
    let plain = bin().arg("decompose").arg(file.path()).output().unwrap();
    assert!(plain.status.success());
    let v: Value = serde_json::from_slice(&plain.stdout).unwrap();
    let statuses: Vec<&Value> = v["splits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| &s["status"])
        .collect();
    assert!(statuses.contains(&&json!("needs_extension")));

    let extended = bin().args(["decompose", "--extend"]).arg(file.path()).output().unwrap();
    assert!(extended.status.success());
    let v: Value = serde_json::from_slice(&extended.stdout).unwrap();
    assert_eq!(v["certificate_status"], "consistent");
    assert!(v["splits"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["certificate"] == "consistent"));
}
