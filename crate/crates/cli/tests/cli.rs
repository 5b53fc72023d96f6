use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn opkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn figure_evaluates() {
    let f = data("figure.sd");
    let o = opkit(&["diagram", "eval", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0↦1 1↦1 2↦0");
}

#[test]
fn normal_form_reevaluates_to_the_same_function() {
    let f = data("figure.sd");
    let o = opkit(&["diagram", "normalize", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("opkit-nf-{}", std::process::id()));
    std::fs::write(&dir, stdout(&o)).unwrap();
    let o = opkit(&["diagram", "eval", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(stdout(&o).trim(), "0↦1 1↦1 2↦0");
}

#[test]
fn lambda_counts() {
    let o = opkit(&["properad", "lambda", "1,1", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
    let o = opkit(&["properad", "lambda", "2,1", "1,2", "--list"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "4");
    assert_eq!(lines.len(), 5);
}

#[test]
fn corrupt_candidate_is_caught() {
    let f = data("corrupt.json");
    let o = opkit(&["operad", "check", f.to_str().unwrap(), "--arity", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("left unit"));
    let f = data("cyclic.json");
    assert_eq!(opkit(&["operad", "check", f.to_str().unwrap(), "--arity", "2"]).status.code(), Some(0));
}

#[test]
fn substitution_counts() {
    let f = data("binary_sym.json");
    let f = f.to_str().unwrap();
    let o = opkit(&["operad", "subst", "--variant", "sigma", f, f, "--arity", "4"]);
    assert!(stdout(&o).contains("arity 4: 3"));
    let g = data("binary.json");
    let g = g.to_str().unwrap();
    let o = opkit(&["operad", "subst", "--variant", "empty", g, g, "--arity", "4"]);
    assert!(stdout(&o).contains("arity 4: 1"));
    let o = opkit(&["operad", "subst", "--variant", "sigma", g, g, "--arity", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(opkit(&["diagram", "eval", "/nonexistent.sd"]).status.code(), Some(2));
    let t = data("truncated_surj.json");
    let t = t.to_str().unwrap();
    let o = opkit(&["operad", "subst", "--variant", "sigma,delta", t, t, "--arity", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_reports_are_reproducible() {
    let f = data("corrupt.json");
    let args = ["--json", "--seed", "7", "operad", "check", f.to_str().unwrap(), "--arity", "2"];
    let (a, b) = (opkit(&args), opkit(&args));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    let start = out.find("{\n").unwrap();
    let v: serde_json::Value = serde_json::from_str(&out[start..]).unwrap();
    assert_eq!(v["schema"], "opkit-report/1");
    assert_eq!(v["outcome"], "fail");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn composite_of_hom_profunctors() {
    let h = data("hom.json");
    let h = h.to_str().unwrap();
    let o = opkit(&["--json", "prof", "compose", h, h]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&out[out.find("{\n").unwrap()..]).unwrap();
    let sizes: Vec<u64> =
        v["result"]["slots"].as_array().unwrap().iter().map(|s| s["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![1, 0, 1, 1]);
}

#[test]
fn cap_is_read_from_the_environment() {
    let f = data("binary_sym.json");
    let f = f.to_str().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_opkit"))
        .env("OPKIT_CAP", "2")
        .args(["operad", "subst", "--variant", "sigma", f, f, "--arity", "4"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn suite_passes() {
    let o = opkit(&["suite", "run"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
