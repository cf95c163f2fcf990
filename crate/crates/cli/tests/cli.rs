use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locochrome"))
        .args(args)
        .env_remove("LOCOCHROME_SEED")
        .env_remove("LOCOCHROME_BUDGET_MS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("locochrome-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_is_deterministic_with_expected_sizes() {
    for (args, n) in [(&["gen", "u", "5", "3"][..], 30), (&["gen", "gap1"][..], 33), (&["gen", "udm", "5", "4", "2"][..], 30)] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        let text = String::from_utf8(a.stdout).unwrap();
        let header: Vec<&str> = text.lines().find(|l| l.starts_with("p ")).unwrap().split_whitespace().collect();
        assert_eq!(header[2].parse::<usize>().unwrap(), n, "{args:?}");
    }
}

#[test]
fn generated_file_reads_back() {
    let path = scratch("u43.lcn");
    std::fs::write(&path, run(&["gen", "u", "4", "3"]).stdout).unwrap();
    let (from_file, code) = json(&["compute", "psi", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (by_name, _) = json(&["compute", "psi", "u-4-3"]);
    assert_eq!(from_file["value"], 3);
    assert_eq!(from_file["graph"]["hash"], by_name["graph"]["hash"]);
}

#[test]
fn compute_examples() {
    let (v, code) = json(&["compute", "chistar", "petersen"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "5/2");
    assert_eq!(v["status"], "exact");
    let (v, _) = json(&["psi", "gap1"]);
    assert_eq!(v["value"], 4);
    let (v, _) = json(&["compute", "alpha", "ud-5-3"]);
    assert_eq!(v["value"], 6);
    let (v, _) = json(&["compute", "psidmax", "cycle-5"]);
    assert_eq!(v["value"], 3);
    let (v, _) = json(&["psidstar", "ud-5-3"]);
    assert_eq!(v["value"], "3/1");
    let text = run(&["--format", "text", "chi", "petersen"]);
    assert_eq!(String::from_utf8(text.stdout).unwrap().trim(), "3");
}

#[test]
fn lp_methods_agree_on_the_command_line() {
    let (a, _) = json(&["compute", "chistar", "u-5-3", "--method", "enumerate"]);
    let (b, _) = json(&["compute", "chistar", "u-5-3", "--method", "column-generation"]);
    assert_eq!(a["value"], b["value"]);
}

#[test]
fn verify_recipes_pass_and_are_deterministic() {
    for recipe in ["gap1", "unicolor", "k1k", "ize", "ratio-b"] {
        let a = run(&["verify", recipe]);
        let b = run(&["verify", recipe]);
        assert_eq!(a.status.code(), Some(0), "{recipe}");
        assert_eq!(a.stdout, b.stdout, "{recipe}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(v["schema"], "locochrome.verification/1");
        assert!(v["claims"].as_array().unwrap().iter().all(|c| c["status"] == "pass"), "{recipe}");
    }
    let (v, code) = json(&["verify", "sampler", "--trials", "20000", "--timing"]);
    assert_eq!(code, 0);
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn claim_failure_exits_one() {
    let path = scratch("w.col");
    let out = run(&["psid", "ud-5-3", "--witness", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let p = path.to_str().unwrap();
    assert_eq!(run(&["verify-cert", "ud-5-3", "--coloring", p, "--k", "3"]).status.code(), Some(0));
    assert_eq!(run(&["verify-cert", "ud-5-3", "--coloring", p, "--k", "2"]).status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two_with_line_number() {
    let path = scratch("bad.lcn");
    std::fs::write(&path, "p lcn 3 1 0\ne 1 5\n").unwrap();
    let out = run(&["psi", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "u", "2", "3"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "psidmax", "u-5-3"]).status.code(), Some(2));
    assert_eq!(run(&["psi", "wheel-5"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_three() {
    let (v, code) = json(&["--budget-ms", "1", "chi", "u-7-3"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "unknown");
    assert!(v["lower"].as_u64().unwrap() >= 3);
}

#[test]
fn sample_reports_membership() {
    let path = scratch("nat.col");
    run(&["psid", "ud-5-3", "--witness", path.to_str().unwrap()]);
    let args = ["sample", "--graph", "ud-5-3", "--coloring", path.to_str().unwrap(), "--h", "3", "--trials", "5000"];
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["all_independent"], true);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 30);
    assert_eq!(json(&args).0, v);
}

#[test]
fn orient_max_writes_an_orientation() {
    let path = scratch("c5.lcn");
    let (v, code) = json(&["orient-max", "cycle-5", "--v0", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["chi_star"], "5/2");
    let (w, _) = json(&["psidstar", path.to_str().unwrap()]);
    assert_eq!(w["value"], "5/2");
}
