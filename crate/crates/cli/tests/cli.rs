use std::process::{Command, Output};

use logmono_core::certify::{CertStatus, SignCertificate};
use logmono_core::logmono::ScanReport;
use serde_json::Value;

fn logmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logmono"))
        .args(args)
        .env_remove("LOGMONO_PREC_CAP")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    logmono(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(logmono(args).stdout).unwrap()
}

#[test]
fn exit_code_matrix() {
    assert_eq!(code(&["bernoulli", "--n-max", "4"]), 0);
    assert_eq!(code(&["verify-theta", "--range", "6.001:20"]), 0);
    // Leading violations of log-convexity at n = 1.
    assert_eq!(code(&["logmono", "inv_root_abs_bernoulli", "--depth", "1", "--n-max", "20"]), 1);
    // No subdivision allowed: the single leaf cannot be decided.
    assert_eq!(code(&["verify-theta", "--range", "6.001:100", "--depth", "0"]), 2);
    assert_eq!(code(&["verify-theta", "--range", "5:10"]), 3);
    assert_eq!(code(&["logmono", "nope"]), 3);
    assert_eq!(code(&["bernoulli", "--n-max", "2001"]), 3);
    assert_eq!(code(&["bernoulli", "--prec", "32"]), 3);
    assert_eq!(code(&["bernoulli", "--range", "3:1"]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
    assert_eq!(code(&["logmono", "tangent", "--range", "1:4", "--depth", "3"]), 3);
}

#[test]
fn bernoulli_rows() {
    assert_eq!(stdout(&["bernoulli", "--n-max", "0"]), "0\t1\n");
    let three = stdout(&["bernoulli", "--n-max", "3"]);
    assert!(three.lines().any(|l| l == "3\t0"));
    let four = stdout(&["bernoulli", "--n-max", "4", "--format", "csv"]);
    assert_eq!(four, "n,B_n\n0,1\n1,-1/2\n2,1/6\n3,0\n4,-1/30\n");
}

#[test]
fn tangent_json() {
    let v: Value = serde_json::from_str(&stdout(&["tangent", "--n-max", "5", "--format", "json"])).unwrap();
    let vals: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(vals, ["1", "2", "16", "272", "7936"]);
}

#[test]
fn certificate_json_round_trip() {
    let out = stdout(&["verify-theta", "--range", "6.001:12", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let cert: SignCertificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert_eq!(cert.status, CertStatus::Certified);
    assert_eq!(serde_json::to_value(&cert).unwrap(), v["certificate"]);
    for key in ["interval", "leaves", "status", "precision_bits"] {
        assert!(v["certificate"].get(key).is_some(), "{key}");
    }
    let leaf = &v["certificate"]["leaves"][0];
    for key in ["lo", "hi", "upper_bound_decimal"] {
        assert!(leaf.get(key).is_some(), "{key}");
    }
}

#[test]
fn scan_json_round_trip() {
    let out = stdout(&["logmono", "tangent", "--depth", "1", "--n-max", "50", "--format", "json"]);
    let rep: ScanReport = serde_json::from_str(&out).unwrap();
    assert_eq!(rep.sequence, "tangent");
    assert_eq!(rep.thresholds.len(), 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_value(&rep).unwrap(), v);
    assert!(v["thresholds"][0].get("N").is_some());
}

#[test]
fn deterministic_output() {
    let args = ["logmono", "inv_root_abs_bernoulli", "--depth", "3", "--n-max", "200", "--format", "json"];
    let a = logmono(&args);
    let b = logmono(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let rs: Vec<u64> = v["thresholds"].as_array().unwrap().iter().map(|t| t["r"].as_u64().unwrap()).collect();
    assert_eq!(rs, [0, 1, 2, 3]);
    let c = logmono(&["verify-theta", "--format", "csv"]);
    let d = logmono(&["verify-theta", "--format", "csv"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn bounds_rows() {
    let out = stdout(&["bounds"]);
    for (name, digits) in [("2log2", "1.386"), ("zeta-part@6", "2.1545"), ("f1(6)", "-3.787")] {
        let line = out.lines().find(|l| l.starts_with(name)).unwrap();
        assert!(line.contains(&format!("computed {digits}")), "{line}");
        assert!(line.ends_with("ok"), "{line}");
    }
    let total = out.lines().find(|l| l.starts_with("total@6")).unwrap();
    assert!(total.contains("-0.2465") && total.contains("-0.2461") && total.ends_with("documented discrepancy"));
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    let out = dir.path().join("out.csv");
    std::fs::write(&conf, "n_max = 3\nformat = csv\n").unwrap();
    let o = logmono(&["tangent", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "n,T_n,oracle\n1,1,ok\n2,2,ok\n3,16,ok\n");
    // Flags win over the file.
    assert_eq!(stdout(&["tangent", "--config", conf.to_str().unwrap(), "--format", "text"]), "1\t1\tok\n2\t2\tok\n3\t16\tok\n");
    std::fs::write(&conf, "bogus\n").unwrap();
    assert_eq!(code(&["tangent", "--config", conf.to_str().unwrap()]), 3);
}

#[test]
fn zeta_and_kth() {
    let z = stdout(&["zeta", "2", "--prec", "256"]);
    assert!(z.starts_with("zeta(2) = 1.644934066848226436472415166646"), "{z}");
    assert_eq!(code(&["zeta", "1"]), 3);
    assert_eq!(code(&["verify-kth", "--k", "2", "--variant", "t", "--n-max", "3"]), 0);
    assert_eq!(code(&["verify-kth", "--k", "4", "--n-max", "3"]), 0);
    assert_eq!(code(&["verify-kth", "--k", "2", "--range", "4:10"]), 3);
    // Below X(4) the sign is not yet the asymptotic one.
    assert_eq!(code(&["verify-kth", "--k", "4", "--range", "8:9", "--n-max", "2"]), 1);
}
