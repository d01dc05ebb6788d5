use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qcross(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcross")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn strip_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.contains("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn qbinom_prints_value() {
    let out = qcross(&["qbinom", "-n", "4", "-k", "2", "-q", "2", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# qcross"));
    assert_eq!(text.lines().last(), Some("35"));
    let out = qcross(&["qbinom", "-n", "4", "-k", "2", "-q", "2"]);
    let v = json(&out);
    assert_eq!(v["result"]["value"], "35/1");
    for key in ["tool", "version", "args", "seed", "timestamp"] {
        assert!(v["provenance"].get(key).is_some(), "provenance lacks {key}");
    }
}

#[test]
fn scan_example_passes() {
    let out = qcross(&["scan", "--lemmas", "2.1,2.4,2.6", "--q", "2,3,4,5", "--k-max", "8"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let summaries = v["result"]["summaries"].as_array().unwrap();
    assert_eq!(summaries[0]["lemma_id"], "h1-gate");
    assert!(summaries.iter().all(|s| s["violations"] == 0));
    let out = qcross(&["scan", "--lemmas", "2.1", "--q", "2", "--m-max", "6", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("lemma_id,grid_point"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&qcross(&["qbinom", "-n", "4"])), 2);
    assert_eq!(code(&qcross(&["qbinom", "-n", "4", "-k", "2", "-q", "6"])), 2);
    let out = qcross(&["scan", "--lemmas", "9.9"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--lemmas"));
    assert_eq!(code(&qcross(&["report", "/no/such/record.json", "--claim", "ekr"])), 2);
    assert_eq!(code(&qcross(&["enum", "-n", "3", "-k", "1", "-q", "2", "--format", "bogus"])), 2);
}

#[test]
fn verify_cross_t_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "f.json");
    let g = path(dir.path(), "g.json");
    for (file, t) in [(&f, "1000"), (&g, "0100")] {
        let out = qcross(&["construct", "trivial", "-q", "2", "-n", "4", "-k", "2", "--t-space", t, "--out", file]);
        assert_eq!(code(&out), 0);
    }
    let out = qcross(&["verify", "cross-t", "--t", "1", "--r", "2", &f, &g]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["result"]["holds"], false);
    assert_eq!(v["result"]["witness"].as_array().unwrap().len(), 2);
    assert_eq!(code(&qcross(&["verify", "cross-t", "--t", "1", &f, &f])), 0);
}

#[test]
fn family_file_errors_name_the_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, r#"{"q": 2, "n": 4, "k": 2, "members": ["1000;0100", "1000;01z0"]}"#).unwrap();
    let out = qcross(&["covers", &bad, "--t", "1"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("member 2"), "{err}");
}

#[test]
fn construct_and_covers_on_h2() {
    let dir = tempfile::tempdir().unwrap();
    let h2 = path(dir.path(), "h2.json");
    let out = qcross(&["construct", "h2", "-q", "2", "-n", "6", "-k", "3", "--z", "100000;010000;001000", "--out", &h2]);
    assert_eq!(code(&out), 0);
    let out = qcross(&["covers", &h2, "--t", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["tau"], 2);
    let out = qcross(&["verify", "structure", "--t", "1", &h2, &h2]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = qcross(&["verify", "size-bound", "--t", "1", &h2, &h2]);
    assert_eq!(code(&out), 0);
}

#[test]
fn search_is_reproducible_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["search", "stochastic", "-q", "2", "-n", "6", "-k", "2", "-t", "1", "--mode", "nontrivial-each", "--budget", "100", "--seed", "5"];
    let a = qcross(&args);
    let b = qcross(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(
        strip_timestamp(&String::from_utf8(a.stdout.clone()).unwrap()),
        strip_timestamp(&String::from_utf8(b.stdout).unwrap())
    );
    let rec = path(dir.path(), "rec.json");
    std::fs::write(&rec, &a.stdout).unwrap();
    let out = qcross(&["report", &rec, "--claim", "hm-pair"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["status"], "exploratory");
    assert_eq!(code(&qcross(&["report", &rec, "--claim", "nonsense"])), 2);

    // resume from the record
    let mut resumed = args.to_vec();
    resumed.extend(["--resume", rec.as_str()]);
    let out = qcross(&resumed);
    assert_eq!(code(&out), 0);
    let before: u128 = json(&a)["result"]["best_product"].as_str().unwrap().trim_end_matches("/1").parse().unwrap();
    let after: u128 = json(&out)["result"]["best_product"].as_str().unwrap().trim_end_matches("/1").parse().unwrap();
    assert!(after >= before);
}

#[test]
fn tampered_record_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcross(&["search", "stochastic", "-q", "2", "-n", "5", "-k", "2", "-t", "1", "--budget", "50"]);
    let mut v = json(&out);
    v["result"]["best_product"] = Value::String("1000000".into());
    let rec = path(dir.path(), "rec.json");
    std::fs::write(&rec, serde_json::to_string(&v).unwrap()).unwrap();
    let out = qcross(&["report", &rec, "--claim", "ekr"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn exhaustive_search_rejects_empty_seed() {
    let out = qcross(&["search", "exhaustive", "-q", "2", "-n", "5", "-k", "2", "-t", "1", "--seed-size", "0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn enum_lists_in_canonical_order() {
    let out = qcross(&["enum", "-n", "4", "-k", "2", "-q", "2", "--limit", "2", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(lines, ["1000;0100", "1000;0101"]);
    let v = json(&qcross(&["enum", "-n", "4", "-k", "2", "-q", "2"]));
    assert_eq!(v["result"]["total"], "35/1");
    assert_eq!(v["result"]["listed"], 35);
}

#[test]
fn workers_do_not_change_output() {
    let base = ["scan", "--lemmas", "2.4", "--q", "2,3", "--k-max", "5"];
    let one = qcross(&[&base[..], &["--workers", "1"]].concat());
    let four = qcross(&[&base[..], &["--workers", "4"]].concat());
    let result = |o: &Output| json(o)["result"].clone();
    assert_eq!(result(&one), result(&four));
}
