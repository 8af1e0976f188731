use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cmhk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmhk"))
        .args(args)
        .env_remove("CMHK_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("cmhk-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn hilbert_two_five_at_five() {
    let o = cmhk(&["hilbert", "-a", "2", "-b", "5", "-p", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "-1");
    let o = cmhk(&["--json", "hilbert", "-a", "2", "-b", "5", "-p", "5"]);
    assert_eq!(json(&o)["report"]["symbol"], -1);
}

#[test]
fn product_formula_on_minus_one_minus_one() {
    let f = scratch("q.json", r#"{"diagonal": ["-1", "-1"]}"#);
    let o = cmhk(&["--json", "qform", "--file", f.to_str().unwrap(), "--product-formula"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let pf = &v["report"]["product_formula"];
    assert_eq!(pf["table"]["real"], -1);
    assert_eq!(pf["table"]["2"], -1);
    assert_eq!(pf["product"], 1);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let _ = std::fs::remove_file(f);
}

#[test]
fn lubin_tate_verify() {
    let o = cmhk(&["lt", "--p", "5", "--e", "2", "--f", "1", "--verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("newton-slope") && text.contains("certificate"));
}

#[test]
fn pipeline_exit_codes() {
    assert_eq!(code(&cmhk(&["pipeline", "--example", "phi5"])), 0);
    assert_eq!(code(&cmhk(&["pipeline", "--example", "gaussian"])), 0);
    let o = cmhk(&["--json", "pipeline", "--example", "phi5-control"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["pass"], false);
}

#[test]
fn pipeline_request_file() {
    let f = scratch(
        "req.json",
        r#"{"g": [1, 1, 1, 1, 1], "r": [0, 0, 0, 0, 1], "p": 2, "precision": 30,
            "gauges": [["1", "2"]], "hodge": {"1": 1, "-1": 1, "0": 2}}"#,
    );
    let o = cmhk(&["--json", "pipeline", "--file", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let _ = std::fs::remove_file(f);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["hilbert", "--bogus"][..],
        &["nonsense"],
        &["hilbert", "-a", "1/0", "-b", "2", "-p", "3"],
        &["hilbert", "-a", "2", "-b", "3", "-p", "4"],
        &["qform", "--file", "/nonexistent/cmhk.json"],
        &["decompose", "--g", "1,0,1", "--r", "0,-1", "-p", "2"],
    ] {
        let o = cmhk(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn json_errors_carry_kind() {
    let o = cmhk(&["--json", "hilbert", "-a", "x", "-b", "2"]);
    assert_eq!(code(&o), 2);
    assert!(json(&o)["report"]["error"]["kind"].is_string());
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "--seed", "11", "norm-test", "--p", "3", "--e", "2", "--count", "12"];
    let a = cmhk(&args);
    let b = cmhk(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 11);
    let c = cmhk(&["--json", "--seed", "12", "norm-test", "--p", "3", "--e", "2", "--count", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cmhk"))
        .args(["--json", "tower", "--p", "3", "--e", "2"])
        .env("CMHK_PRECISION", "17")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"precision\": 17"));
    let o = cmhk(&["--json", "--precision", "23", "tower", "--p", "3", "--e", "2"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"precision\": 23"));
}

#[test]
fn subcommands_smoke() {
    let runs: [&[&str]; 7] = [
        &["tower", "--p", "3", "--f", "2", "--e", "2"],
        &["norm-test", "--p", "5", "--e", "2", "--dwork"],
        &["cm", "--p", "5", "--e", "2", "--star", "negate_pi", "--gauge", "[\"1\", \"0\"]", "--survey", "10"],
        &["filtered-cm", "--star", "1,0,3,2", "--weights", "1,-1,2,-2"],
        &["filtered-cm", "--random", "50"],
        &["decompose", "--g", "1,1,1,1,1", "--r", "0,0,0,0,1", "-p", "2"],
        &["decompose", "--g", "1,0,1", "--r", "0,-1", "-p", "2", "--factor", "1,0,1"],
    ];
    for args in runs {
        let o = cmhk(args);
        assert_eq!(
            code(&o),
            0,
            "{args:?}\n{}\n{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn phi_module_file() {
    let f = scratch(
        "phi.json",
        r#"{"layer": {"p": 3, "f": 1}, "frob_matrix": [["0", "3"], ["1", "0"]], "hodge_jumps": [[0, 1], [1, 1]]}"#,
    );
    let o = cmhk(&["--json", "phi", "--file", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let _ = std::fs::remove_file(f);
}
