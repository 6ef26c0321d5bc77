use std::fs;
use std::process::{Command, Output};

fn modcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcalc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn eval_lm() {
    let o = modcalc(&["eval", "lm", "--p", "3", "--m", "2", "--x", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2 (mod 6), e=5");
}

#[test]
fn eval_e() {
    let o = modcalc(&["eval", "E", "--p", "3", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "13 (mod 27)");
}

#[test]
fn eval_lm_non_unit() {
    let o = modcalc(&["eval", "lm", "--p", "3", "--m", "2", "--x", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("not a unit"));
}

#[test]
fn eval_other_functions() {
    let cases: [(&[&str], &str); 9] = [
        (&["eval", "lm", "--p", "3", "--m", "2", "--x", "-1"], "3 (mod 6), e=5"),
        (&["eval", "lmE", "--p", "3", "--m", "3", "--x", "4"], "7 (mod 9)"),
        (&["eval", "powE", "--p", "3", "--m", "3", "--x", "7"], "4 (mod 27)"),
        (&["eval", "root", "--p", "3", "--m", "2", "--w", "10"], "4 (mod 9)"),
        (&["eval", "gen", "--p", "3", "--m", "2"], "e=5, E=4 (mod 9)"),
        (&["eval", "digits", "--x", "7", "--q", "5", "--n", "2"], "[2, 1] (q = 5)"),
        (&["eval", "It", "--p", "5", "--t", "0", "--x", "3"], "0 (mod 5)"),
        (&["eval", "sqrt", "--p", "7", "--m", "1", "--x", "2"], "3 (mod 7)"),
        (&["eval", "omega", "--p", "5", "--m", "1"], "2 (mod 5)"),
    ];
    for (args, want) in cases {
        let o = modcalc(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
}

#[test]
fn claims_single() {
    let o = modcalc(&["claims", "run", "--id", "C4", "--p", "3", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    modcalc::claims::validate_report(&doc).unwrap();
    let arr = doc.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["id"], "C4");
    assert_eq!(arr[0]["verdict"], "PASS");
    assert!(arr[0]["elapsed_ms"].is_null());
}

#[test]
fn claims_unknown() {
    let o = modcalc(&["claims", "run", "--id", "C99"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("C99"));
}

#[test]
fn claims_all_deterministic_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let o1 = modcalc(&["claims", "run", "--all", "--p", "3", "--threads", "2", "--out", a.to_str().unwrap()]);
    assert_eq!(o1.status.code(), Some(0), "{}", stderr(&o1));
    let o2 = Command::new(env!("CARGO_BIN_EXE_modcalc"))
        .args(["claims", "run", "--all", "--p", "3", "--out", b.to_str().unwrap()])
        .env("MODCALC_THREADS", "5")
        .output()
        .unwrap();
    assert_eq!(o2.status.code(), Some(0));
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let doc: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    modcalc::claims::validate_report(&doc).unwrap();
    let ids: Vec<&str> = doc.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert_eq!(ids.len(), modcalc::claims::claim_ids().len());
    assert!(stderr(&o1).contains("36 claims"));
}

#[test]
fn non_must_pass_failure_exits_0() {
    // C17 at p = 5 fails, but C17 is not must-pass; C16 is must-pass only at p = 3
    let o = modcalc(&["claims", "run", "--id", "C17", "--id", "C16", "--p", "5", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc.as_array().unwrap().iter().any(|r| r["verdict"] == "FAIL"));
}

#[test]
fn claims_timings_and_bad_threads() {
    let o = modcalc(&["claims", "run", "--id", "C1", "--timings"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc[0]["elapsed_ms"].is_u64());
    assert_eq!(modcalc(&["claims", "run", "--id", "C1", "--threads", "0"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_modcalc"))
        .args(["claims", "run", "--id", "C1"])
        .env("MODCALC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_relaxed_row() {
    let o = modcalc(&["search", "--amax", "10", "--bmax", "10", "--cmax", "10", "--p", "3", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows, serde_json::json!([{ "a": 1, "b": 2, "c": 3, "p": 3, "q": 2 }]));
    assert!(stderr(&o).contains("progress"));
}

#[test]
fn search_csv_and_no_filter() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = modcalc(&[
        "search", "--amax", "10", "--p", "3", "--q", "2", "--format", "csv", "--no-filter", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "a,b,c,p,q\n1,2,3,3,2\n");
}

#[test]
fn search_strict_window_empty() {
    let o = modcalc(&[
        "search", "--amax", "30", "--bmax", "30", "--cmax", "30", "--p", "41,43", "--q", "41..50", "--strict",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows, serde_json::json!([]));
    let o = modcalc(&["search", "--amax", "30", "--p", "41,43", "--q", "41..50", "--strict", "--format", "csv"]);
    assert_eq!(stdout(&o), "a,b,c,p,q\n");
}

#[test]
fn search_rejects_zero_range() {
    assert_eq!(modcalc(&["search", "--amax", "0", "--p", "3", "--q", "2"]).status.code(), Some(1));
    assert_eq!(modcalc(&["search", "--amax", "0"]).status.code(), Some(1));
    assert_eq!(modcalc(&["search", "--amax", "5", "--p", "5..3", "--q", "2"]).status.code(), Some(1));
}

#[test]
fn cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = modcalc(&["eval", "lm", "--p", "7", "--m", "2", "--x", "3", "--cache-dir", d]);
    assert_eq!(o.status.code(), Some(0));
    let plain = modcalc(&["eval", "lm", "--p", "7", "--m", "2", "--x", "3"]);
    assert_eq!(stdout(&o), stdout(&plain));
    let listing = stdout(&modcalc(&["cache", "inspect", "--cache-dir", d]));
    assert!(listing.starts_with("dlog_p7_m2_e"), "{listing}");
    assert!(listing.contains("\tok\t"));
    // corrupt the file: the next use rebuilds it
    let file = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    fs::write(&file, "{\"p\": 7}").unwrap();
    assert!(stdout(&modcalc(&["cache", "inspect", "--cache-dir", d])).contains("corrupt"));
    let again = modcalc(&["eval", "lm", "--p", "7", "--m", "2", "--x", "3", "--cache-dir", d]);
    assert_eq!(stdout(&again), stdout(&plain));
    assert!(stdout(&modcalc(&["cache", "inspect", "--cache-dir", d])).contains("\tok\t"));
    let o = modcalc(&["cache", "clear", "--cache-dir", d]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("removed 1"));
    assert!(stdout(&modcalc(&["cache", "inspect", "--cache-dir", d])).is_empty());
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(modcalc(&["--help"]).status.code(), Some(0));
    assert_eq!(modcalc(&["eval", "--help"]).status.code(), Some(0));
    assert_eq!(modcalc(&[]).status.code(), Some(1));
    assert_eq!(modcalc(&["eval", "nope"]).status.code(), Some(1));
    assert_eq!(modcalc(&["eval", "E", "--p", "4", "--m", "2"]).status.code(), Some(1));
    assert_eq!(modcalc(&["claims", "run"]).status.code(), Some(1));
}
