use std::process::{Command, Output};

use serde_json::Value;

fn rtva(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtva"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_verdicts_and_exit_codes() {
    let o = rtva(&["run", "zoo:ugauss-dva2", "--input", "aa"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("ACCEPT\nsteps: 4\n"), "{out}");
    assert!(out.contains("\"vector\":[\"1\",\"2\"]"), "{out}");

    let o = rtva(&["run", "zoo:pow-nbva2", "--input", "aaaa"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("REJECT"));

    let o = rtva(&["run", "zoo:mpal-dbva2", "--input", "c"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn trace_is_json_with_one_entry_per_step() {
    let o = rtva(&["run", "zoo:ugauss-2ca", "--input", "aaaaaa", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let json_start = out.find("\n{").unwrap();
    let trace: Value = serde_json::from_str(&out[json_start..]).unwrap();
    assert_eq!(trace["steps"].as_array().unwrap().len(), 8);
}

#[test]
fn usage_and_resource_errors() {
    assert_eq!(rtva(&["run", "zoo:unknown"]).status.code(), Some(2));
    assert_eq!(
        rtva(&["run", "zoo:ugauss-dva2", "--input", "ab"]).status.code(),
        Some(2)
    );
    assert_eq!(rtva(&["run", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(rtva(&["frobnicate"]).status.code(), Some(2));
    let o = rtva(&["run", "zoo:geqstar-fam", "--input", "aab", "--step-budget", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = rtva(&[
        "run",
        "zoo:subsetsum",
        "--input",
        "111#1#1#1#1#",
        "--frontier-cap",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = rtva(&["convert", "zoo:ugauss-2ca", "--to", "dva1"]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "per-counter tests have no one-dimensional encoding"
    );
}

#[test]
fn parse_errors_carry_line_context() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"kind\": \"dva\",\n  \"states\": [1,\n").unwrap();
    let o = rtva(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn convert_records_provenance_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lng2.json");
    let o = rtva(&[
        "convert",
        "zoo:lng-2",
        "--to",
        "counters",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["kind"], "counter");
    assert_eq!(doc["provenance"]["primes"], serde_json::json!([2, 3, 5]));
    assert_eq!(doc["provenance"]["transform"], "dva1_to_counter_machine");

    let again = dir.path().join("again.json");
    rtva(&[
        "convert",
        "zoo:lng-2",
        "--to",
        "counters",
        "-o",
        again.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());

    let o = rtva(&["run", out.to_str().unwrap(), "--input", "a0a1a2a3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = rtva(&["run", out.to_str().unwrap(), "--input", "a0a1a2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn weighted_conversions() {
    let o = rtva(&["convert", "zoo:mod3-tufa", "--to", "dbva", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 1);
    assert_eq!(doc["dim"], 3);

    let o = rtva(&["convert", "zoo:mpal-dbva2", "--to", "tufa"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["n"], 6, "two coordinates times three states");
}

#[test]
fn eval_prints_exact_values() {
    assert_eq!(stdout(&rtva(&["eval", "zoo:mod3-tufa", "--input", "aa"])), "1\n");
    assert_eq!(stdout(&rtva(&["eval", "zoo:mod3-tufa", "--input", "aaa"])), "0\n");
    assert_eq!(stdout(&rtva(&["eval", "zoo:mod3-tufa", "--input", ""])), "0\n");
    assert_eq!(
        rtva(&["eval", "zoo:mod3-tufa", "--input", "b"]).status.code(),
        Some(2)
    );
    assert_eq!(rtva(&["eval", "zoo:ugauss-dva2"]).status.code(), Some(2));
}

#[test]
fn check_reports() {
    let o = rtva(&[
        "check",
        "zoo:subsetsum",
        "--against",
        "oracle",
        "--random",
        "2000",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["words_tested"], 2000);
    assert!(r["counterexample"].is_null());

    let o = rtva(&[
        "check",
        "zoo:subsetsum",
        "--against",
        "oracle",
        "--generator",
        "subsetsum",
        "--random",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let o = rtva(&[
        "check",
        "zoo:geqstar-dva2",
        "--against",
        "oracle",
        "--max-len",
        "14",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["words_tested"], 32767);

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = rtva(&[
        "check",
        "zoo:geqstar-dva2(fidelity)",
        "--against",
        "oracle",
        "--max-len",
        "6",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let word = r["counterexample"]["word"].as_str().unwrap();
    assert!(word.len() <= 6);
    let replay = rtva(&["run", "zoo:geqstar-dva2", "--fidelity", "--input", word]);
    assert_eq!(
        replay.status.code(),
        Some(0),
        "the literal machine accepts a word outside the language"
    );

    let o = rtva(&[
        "check",
        "zoo:geqstar-dva2",
        "--against",
        "zoo:geqstar-fam",
        "--max-len",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = rtva(&["check", "zoo:lng-2", "--against", "oracle", "--max-len", "30"]);
    assert_eq!(o.status.code(), Some(2), "too many words to enumerate");
}

#[test]
fn zoo_list_and_export() {
    let o = rtva(&["zoo", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("ugauss-dva2\tdva")));
    assert!(out.lines().any(|l| l.starts_with("subsetsum\tnbva")));

    let dir = tempfile::tempdir().unwrap();
    for (id, fid) in [
        ("geqstar-dva2", false),
        ("geqstar-dva2", true),
        ("famw-pausing", false),
        ("mod5-tufa", false),
    ] {
        let path = dir.path().join(format!("{id}-{fid}.json"));
        let mut args = vec!["zoo", "export", id, "-o", path.to_str().unwrap()];
        if fid {
            args.push("--fidelity");
        }
        assert_eq!(rtva(&args).status.code(), Some(0));
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = rtva::MachineDoc::parse(&text).unwrap();
        assert_eq!(
            doc.to_json_string(),
            text,
            "export is a fixed point of parse and print"
        );
        assert_eq!(doc.machine, rtva::zoo::build(id, fid).unwrap().machine);
    }
    let lit = dir.path().join("geqstar-dva2-true.json");
    let o = rtva(&[
        "check",
        lit.to_str().unwrap(),
        "--against",
        "oracle",
        "--oracle",
        "geqstar-dva2",
        "--max-len",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(1));
}
