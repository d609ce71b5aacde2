use std::path::Path;
use std::process::{Command, Output};

use discmax::corpus::{manifest_to_json, GeneratorSpec, Kind};
use discmax::maxops::{Operator, OperatorConfig};
use discmax::seq::FiniteSequence;
use discmax::verify::certified_window;

fn discmax(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discmax"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("delta.json"), r#"{"offset":0,"values":[1]}"#).unwrap();
    std::fs::write(dir.path().join("spike.json"), r#"{"offset":1,"values":[4]}"#).unwrap();
    std::fs::write(dir.path().join("mixed.json"), r#"{"offset":-3,"values":[1,-0.5,0,2.25]}"#).unwrap();
    let specs = vec![
        GeneratorSpec::new(Kind::Delta, 1, 1.0, 0),
        GeneratorSpec::new(Kind::RandomDense, 16, 0.5, 9),
        GeneratorSpec::new(Kind::GeometricSpikes, 64, 2.0, 4),
    ];
    std::fs::write(dir.path().join("small.json"), manifest_to_json(&specs)).unwrap();
    dir
}

#[test]
fn eval_writes_csv_matching_the_library() {
    let ws = workspace();
    let o = discmax(ws.path(), &["eval", "--op", "sharp", "--in", "delta.json", "--window", "-8:8", "--out", "m.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(ws.path().join("m.csv")).unwrap();
    assert!(csv.starts_with("m,value\n"));
    assert!(csv.lines().any(|l| l == "0,0.5"));
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().count(), 18);

    let a = FiniteSequence::from_json(r#"{"offset":-3,"values":[1,-0.5,0,2.25]}"#).unwrap();
    let w = certified_window(&a).unwrap();
    let cfg = OperatorConfig::default();
    for op in Operator::ALL {
        let o = discmax(ws.path(), &["eval", "--op", op.name(), "--in", "mixed.json"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let rows: Vec<(i64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let (m, v) = l.split_once(',').unwrap();
                (m.parse().unwrap(), v.parse().unwrap())
            })
            .collect();
        assert_eq!(rows.len() as u64, w.len());
        assert_eq!(rows[0].0, w.lo());
        for (m, v) in rows {
            assert_eq!(v.to_bits(), op.eval(&a, m, &cfg).to_bits(), "{op} at {m}");
        }
    }
}

#[test]
fn cz_writes_records() {
    let ws = workspace();
    let o = discmax(ws.path(), &["cz", "--in", "spike.json", "--t", "1", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["lo"], 1);
    assert_eq!(recs[0]["hi"], 2);
    assert_eq!(recs[0]["avg"], 2.0);
    for key in ["parent_lo", "parent_hi", "parent_avg"] {
        assert!(recs[0].get(key).is_some());
    }
}

#[test]
fn verify_reports_and_exit_codes() {
    let ws = workspace();
    let o = discmax(ws.path(), &["verify", "--check", "sandwich", "--corpus", "small.json", "--csv", "s.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["check_id"], "sandwich");
    assert_eq!(report["pass"], true);
    assert_eq!(report["extremal_ratio"], 3.0);
    let csv = std::fs::read_to_string(ws.path().join("s.csv")).unwrap();
    assert!(csv.starts_with("sequence,check,param,lhs,rhs,ratio,pass\n"));

    let o = discmax(ws.path(), &["verify", "--check", "all", "--corpus", "small.json", "--out", "all.json"]);
    assert_eq!(o.status.code(), Some(0));
    let all: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(ws.path().join("all.json")).unwrap()).unwrap();
    assert_eq!(all.as_array().unwrap().len(), 9);

    // A dyadic operator that skips the fine levels breaks the ℓᵖ comparison.
    let o = discmax(
        ws.path(),
        &["verify", "--check", "lp_domination", "--corpus", "small.json", "--min-level", "20", "--out", "bad.json"],
    );
    assert_eq!(o.status.code(), Some(1));
    let bad: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(ws.path().join("bad.json")).unwrap()).unwrap();
    assert_eq!(bad["pass"], false);
    assert!(!bad["violations"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_name_the_flag_or_file() {
    let ws = workspace();
    let cases: [(&[&str], &str); 10] = [
        (&["eval", "--op", "nope", "--in", "delta.json"], "--op"),
        (&["eval", "--op", "sharp", "--in", "missing.json"], "missing.json"),
        (&["eval", "--op", "sharp", "--in", "delta.json", "--window", "3:1"], "--window"),
        (&["eval", "--op", "sharp", "--in", "delta.json", "--window", "a:b"], "--window"),
        (&["eval", "--op", "sharp", "--in", "small.json"], "small.json"),
        (&["cz", "--in", "spike.json", "--t", "-1"], "--t"),
        (&["cz", "--in", "spike.json", "--t", "1", "--alpha", "1"], "--alpha"),
        (&["verify", "--check", "nope", "--corpus", "small.json"], "--check"),
        (&["verify", "--check", "all", "--corpus", "delta.json"], "delta.json"),
        (&["constants", "--ratio", "nope"], "--ratio"),
    ];
    for (args, needle) in cases {
        let o = discmax(ws.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(discmax(ws.path(), &[]).status.code(), Some(2));
    assert_eq!(discmax(ws.path(), &["eval", "--in", "delta.json"]).status.code(), Some(2));
    assert_eq!(discmax(ws.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn norms_constants_and_gen() {
    let ws = workspace();
    let o = discmax(ws.path(), &["norms", "--in", "delta.json", "--op", "dyadic", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "op,p,value,tail_bound\ndyadic,2.0,0.75,0.0\n");
    let o = discmax(ws.path(), &["norms", "--in", "delta.json", "--p", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = discmax(ws.path(), &["constants", "--ratio", "sandwich_pointwise", "--iterations", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["best_ratio"], 3.0);
    assert_eq!(v["witness"]["values"][0], 1.0);

    let o = discmax(ws.path(), &["gen", "--corpus", "small.json", "--out-dir", "out"]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read_to_string(ws.path().join("out/seq_0000.json")).unwrap();
    assert_eq!(FiniteSequence::from_json(&first).unwrap(), FiniteSequence::delta(0, 1.0).unwrap());
    assert!(ws.path().join("out/seq_0002.json").exists());
    assert!(ws.path().join("out/manifest.json").exists());
}
