use std::process::Command;

fn toroidal(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_toroidal"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

const BASE: [&str; 11] = [
    "verify", "--n", "2", "--N", "1", "--lambda", "0,1,2", "--box", "1", "--seed", "42",
];

fn with(extra: &[&str]) -> Vec<String> {
    BASE.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(extra: &[&str]) -> (i32, String, String) {
    let args = with(extra);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    toroidal(&refs)
}

#[test]
fn relations_pass_with_exit_zero() {
    let (code, out, _) = run(&["--kappa", "builtin:point-at-zero:1,-1", "--vectors", "4", "--suite", "relations,heisenberg"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS R3"));
    assert!(out.lines().last() == Some("PASS"));
}

#[test]
fn report_file_has_config_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    let (code, _, _) = run(&["--kappa", "builtin:positive-cone", "--vectors", "3", "--suite", "chains,formal", "--output", p]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["n"], 2);
    assert_eq!(v["config"]["N"], 1);
    assert_eq!(v["config"]["kappa"][0]["m"], serde_json::json!([1, 1]));
    assert_eq!(v["kappa_validation"]["pass"], true);
    assert_eq!(v["config"]["suites"], serde_json::json!(["formal", "chains"]));
}

#[test]
fn decomposition_violating_kappa_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    // orthogonality holds at (-2,0), but the weight-one pairing sum does not vanish
    std::fs::write(&path, r#"[{"m": [-2, 0], "p": 1, "value": "1"}]"#).unwrap();
    let (code, _, err) = run(&["--kappa", path.to_str().unwrap(), "--suite", "chains"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("\"decomposition\""), "{err}");
}

#[test]
fn orthogonality_violating_builtin_exits_two() {
    let (code, _, err) = run(&["--kappa", "builtin:positive-cone:(1,1)=1,1", "--suite", "chains"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn parse_errors_exit_64() {
    assert_eq!(run(&["--kappa", "builtin:nope"]).0, 64);
    assert_eq!(run(&["--kappa", "builtin:point-at-zero:1,2,3"]).0, 64);
    assert_eq!(run(&["--suite", "everything"]).0, 64);
    assert_eq!(run(&["--weights", "1,x"]).0, 64);
    assert_eq!(run(&["--kappa", "/no/such/file.json"]).0, 64);
    assert_eq!(toroidal(&["verify", "--n", "two"]).0, 64);
    assert_eq!(toroidal(&["frobnicate"]).0, 64);
    assert_eq!(toroidal(&["verify", "--n", "1"]).0, 64);
}

#[test]
fn mutation_suite_exits_zero() {
    let (code, out, _) = run(&["--kappa", "builtin:point-at-zero:1,-1", "--vectors", "4", "--suite", "mutation"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS mutation"));
}

#[test]
fn dump_realization_prints_term_list() {
    let (code, out, _) = run(&["--kappa", "builtin:point-at-zero:1,-1", "--dump-realization", "F0:1,0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("rho(F_0)((1,0)): 9 terms"), "{out}");
    let (code, out, _) = run(&["--dump-realization", "E0:0,0"]);
    assert_eq!(code, 0);
    assert!(out.contains("-1 a[1,3]"), "{out}");
    assert_eq!(run(&["--dump-realization", "Q1:0,0"]).0, 64);
}

#[test]
fn identical_configs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let (code, _, _) = run(&[
            "--kappa",
            "builtin:positive-cone",
            "--weights",
            "ramp",
            "--vectors",
            "3",
            "--suite",
            "heisenberg,relations,grading",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}
