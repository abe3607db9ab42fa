use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwarz-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn list_names_every_suite() {
    let out = lab(&["--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["main", "quasibalanced", "nthroot", "equality", "spectral", "metrics", "all"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
}

#[test]
fn jsonl_to_stdout_ends_with_summary() {
    let out = lab(&["equality", "--trials", "3", "--grid", "5", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3 * 5 * 2 + 1);
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["trials"], 3);
    assert_eq!(summary["violations"], 0);
    assert_eq!(lines[0]["suite"], "equality");
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = lab(&[
        "metrics",
        "--trials",
        "2",
        "--grid",
        "2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("suite,trial,check,sample,"));
    assert!(text.lines().last().unwrap().starts_with("# summary {"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "suite = nthroot\ntrials = 2\ngrid = 3\nseed = 5\n").unwrap();
    let out = lab(&["--config", cfg.to_str().unwrap(), "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["summary"]["trials"], 1);
    assert_eq!(summary["summary"]["seed"], 5);
}

#[test]
fn violations_exit_with_one() {
    // The equality suite is an agreement check; an absurdly small tolerance
    // turns rounding noise into violations.
    let out = lab(&["equality", "--trials", "2", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(lab(&["nonsense"]).status.code(), Some(2));
    assert_eq!(lab(&["main", "--n", "9"]).status.code(), Some(2));
    assert_eq!(lab(&[]).status.code(), Some(2));
    assert_eq!(lab(&["main", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(lab(&["main", "--config", "/nonexistent/file"]).status.code(), Some(2));
}
