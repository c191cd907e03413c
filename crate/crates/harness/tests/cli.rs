use std::path::Path;
use std::process::{Command, Output};

fn goldminers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goldminers")).args(args).output().unwrap()
}

fn repo(rel: &str) -> String {
    format!("{}/../../{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn run_prints_a_record() {
    let o = goldminers(&[
        "run",
        "--team",
        "smart",
        "--selector",
        "meu",
        "--epsilon",
        "0.05",
        "--seed",
        "2",
        "--steps",
        "40",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["condition"], "smart+meu");
    assert_eq!(v["seed"], 2);
    assert_eq!(v["steps"], 40);
}

#[test]
fn trace_file_is_written_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let read_trace = |name: &str| {
        let p = dir.path().join(name);
        let o = goldminers(&[
            "run",
            "--scenario",
            &repo("scenarios/tiny.json"),
            "--team",
            "dummy",
            "--trace",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        std::fs::read_to_string(p).unwrap()
    };
    let a = read_trace("a.tsv");
    assert!(a.starts_with(harness::run::TRACE_HEADER));
    assert_eq!(a, read_trace("b.tsv"));
}

#[test]
fn validation_errors_exit_with_one() {
    for args in [
        vec!["run", "--epsilon", "2"],
        vec!["run", "--selector", "greedy"],
        vec!["run", "--team", "clever"],
        vec!["run", "--bogus"],
        vec!["run", "--scenario", "/no/such/file.json"],
        vec!["launch"],
        vec!["sweep"],
    ] {
        let o = goldminers(&args);
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_is_not_an_error() {
    assert_eq!(code(&goldminers(&["--help"])), 0);
}

#[test]
fn report_needs_both_smart_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    std::fs::write(&csv, format!("{}\ndummy+rr,0,2,3,1,2,4\n", harness::sweep::CSV_HEADER)).unwrap();
    assert_eq!(code(&goldminers(&["report", "--csv", csv.to_str().unwrap()])), 1);
    std::fs::write(&csv, format!("{}\nsmart+meu,0,2,5,1,4,6\nsmart+rr,0,2,3,1,2,4\n", harness::sweep::CSV_HEADER))
        .unwrap();
    let o = goldminers(&["report", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("0\t5.000\t3.000\t+2.000"), "{text}");
}

#[test]
fn sweep_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(&cfg, r#"{"epsilons": [0, 0.1], "seeds": 2, "conditions": ["smart+rr", "smart+meu"], "steps": 60}"#)
        .unwrap();
    let out = dir.path().join("out.csv");
    let o = goldminers(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("smart+meu"));
}

#[test]
fn compile_policy_reproduces_the_shipped_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("policy.json");
    let o = Command::new(env!("CARGO_BIN_EXE_goldminers"))
        .args(["compile-policy", "--model", &repo("models/miners-id.json"), "--out", out.to_str().unwrap()])
        .env("SOURCE_DATE_EPOCH", "1760572800")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let shipped = std::fs::read_to_string(repo("models/miners-policy.json")).unwrap();
    assert_eq!(std::fs::read_to_string(out).unwrap(), shipped);
}

#[test]
fn fit_then_compile_then_run() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    let run = goldminers(&["run", "--selector", "meu", "--seed", "3", "--steps", "150", "--traces-out", &p("t.tsv")]);
    assert_eq!(code(&run), 0);
    assert!(Path::new(&p("t.tsv")).exists());
    let fit = goldminers(&["fit", "--traces", &p("t.tsv"), "--out", &p("m.json")]);
    assert_eq!(code(&fit), 0, "{}", String::from_utf8_lossy(&fit.stderr));
    let compile = goldminers(&["compile-policy", "--model", &p("m.json"), "--out", &p("pol.json")]);
    assert_eq!(code(&compile), 0);
    let o =
        goldminers(&["run", "--selector", "meu", "--steps", "30", "--model", &p("m.json"), "--policy", &p("pol.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    // a policy compiled for another model is refused
    let o = goldminers(&["run", "--selector", "meu", "--steps", "30", "--policy", &p("pol.json")]);
    assert_eq!(code(&o), 1);
}

#[test]
fn malformed_traces_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.tsv");
    std::fs::write(&t, "not\ta\ttrace\n").unwrap();
    let o = goldminers(&["fit", "--traces", t.to_str().unwrap(), "--out", dir.path().join("m.json").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn program_errors_name_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("miner.asl"), "!go.\n+!go <- move(up) $.\n").unwrap();
    let o = goldminers(&["run", "--team", "dummy", "--programs", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let want = format!("{}:2:18:", dir.path().join("miner.asl").display());
    assert!(String::from_utf8_lossy(&o.stderr).contains(&want), "{}", String::from_utf8_lossy(&o.stderr));
}
