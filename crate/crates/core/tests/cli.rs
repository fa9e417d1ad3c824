use std::process::Command;

use thetawh::cli::report::{AnalyzeReport, KpReport, ReproduceReport, VerifyReport};
use thetawh::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["thetawh".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn roundtrip<T: serde::Serialize + serde::de::DeserializeOwned>(text: &str) {
    let v: T = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_thetawh");
    let st = Command::new(bin).args(["analyze", "--family", "G", "--rank", "2", "--degree", "7"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let st = Command::new(bin).args(["analyze", "--colour", "red"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("Usage"));
    let st = Command::new(bin).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(st.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["analyze", "--family", "A", "--rank", "2"][..],
        &["analyze", "--family", "Q", "--rank", "2", "--degree", "3"],
        &["analyze", "--family", "E", "--rank", "8", "--degree", "2"],
        &["analyze", "--family", "GL", "--rank", "2", "--degree", "3", "--kp-p", "0", "--kp-q", "3"],
        &["analyze", "--family", "GL", "--rank", "2", "--degree", "3"],
        &["analyze", "--family", "C", "--rank", "2", "--degree", "3", "--kp-p", "0"],
        &["analyze", "--family", "C", "--rank", "2", "--degree", "3", "--format", "yaml"],
        &["reproduce", "t-X"],
        &["verify", "--config", "/nonexistent/settings"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {out} {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn analyze_reports() {
    let (code, out, _) = run(&["analyze", "--family", "G", "--rank", "2", "--degree", "7"]);
    assert_eq!(code, 0);
    let r: AnalyzeReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.schema, 1);
    assert_eq!(r.dim.branches.len(), 1);
    assert_eq!(r.dim.branches[0].dim, 1);
    roundtrip::<AnalyzeReport>(&out);

    let (_, out, _) = run(&["analyze", "--family", "C", "--rank", "3", "--degree", "7"]);
    let r: AnalyzeReport = serde_json::from_str(&out).unwrap();
    assert!(r.dim.branches.iter().all(|b| b.dim == 1));

    let (_, out, _) = run(&["analyze", "--family", "A", "--rank", "1", "--degree", "1"]);
    let r: AnalyzeReport = serde_json::from_str(&out).unwrap();
    let sv = r.survey.unwrap();
    assert_eq!(sv.total_classes, 1);
    assert_eq!(sv.lower, sv.upper);

    let (code, out, _) = run(&["analyze", "--family", "A", "--rank", "8", "--degree", "9", "--format", "md"]);
    assert_eq!(code, 0);
    assert!(out.contains("light route"));
}

#[test]
fn twist_fixes_the_branch() {
    let dims = |k: &str| {
        let (_, out, _) = run(&["analyze", "--family", "C", "--rank", "2", "--degree", "10", "--twist-omega", k]);
        let r: AnalyzeReport = serde_json::from_str(&out).unwrap();
        r.distinguished.unwrap().rows.iter().map(|x| x.dim).collect::<Vec<_>>()
    };
    assert!(dims("0").iter().all(|&d| d == 3));
    assert!(dims("1").iter().all(|&d| d == 1));
    assert_eq!(dims("2"), dims("12"));
}

#[test]
fn worker_count_does_not_change_output() {
    for args in [
        &["analyze", "--family", "C", "--rank", "3", "--degree", "14"][..],
        &["analyze", "--family", "A", "--rank", "5", "--degree", "6"],
        &["reproduce", "t-C"],
        &["verify", "--seed", "9"],
    ] {
        let mut outs = Vec::new();
        for j in ["1", "2", "4"] {
            let mut a = args.to_vec();
            a.extend(["--jobs", j]);
            let (code, out, _) = run(&a);
            assert_eq!(code, 0, "{a:?}");
            outs.push(out);
        }
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn other_reports_roundtrip() {
    let (code, out, _) = run(&["verify", "--family", "C", "--rank", "2", "--degree", "10"]);
    assert_eq!(code, 0);
    roundtrip::<VerifyReport>(&out);
    let (code, out, _) = run(&["reproduce", "t-G2"]);
    assert_eq!(code, 0);
    roundtrip::<ReproduceReport>(&out);
    let (code, out, _) = run(&["kp", "--rank", "3"]);
    assert_eq!(code, 0);
    let r: KpReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.rows.len(), 2 + 3 + 4);
    roundtrip::<KpReport>(&out);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("thetawh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sp4.conf");
    std::fs::write(&path, "# Sp4\nfamily = C\nrank = 2\ndegree = 10\nformat = json\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, from_file, _) = run(&["analyze", "--config", p]);
    assert_eq!(code, 0);
    let (_, from_flags, _) = run(&["analyze", "--family", "C", "--rank", "2", "--degree", "10"]);
    assert_eq!(from_file, from_flags);
    let (_, md, _) = run(&["analyze", "--config", p, "--degree", "6", "--format", "md"]);
    assert!(md.starts_with("## C2 n=6"));
    std::fs::write(&path, "family = C\nshape = round\n").unwrap();
    let (code, _, err) = run(&["analyze", "--config", p]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown key"));
    std::fs::remove_dir_all(&dir).unwrap();
}
