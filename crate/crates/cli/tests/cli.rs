use std::process::Command;

use geoflow_cli::validate::{run_checks, Fault, Status, CHECKS};
use geoflow_cli::{CommonArgs, Format};
use geoflow_core::analysis::closed_g;
use geoflow_core::shift::QuotientEdge;
use num_bigint::BigUint;
use serde_json::Value;

fn geoflow(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_geoflow"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = geoflow(&all);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn rows(v: &Value) -> Vec<(u64, String)> {
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["n"].as_u64().unwrap(),
                r["count"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

fn pairs(xs: &[(u64, &str)]) -> Vec<(u64, String)> {
    xs.iter().map(|(n, c)| (*n, c.to_string())).collect()
}

#[test]
fn count_examples() {
    let v = json(&[
        "count", "--q", "2", "--steps", "9", "--flow", "pgl3", "--kind", "g", "--method", "dp",
    ]);
    assert_eq!(rows(&v), pairs(&[(3, "24"), (6, "1536"), (9, "98304")]));
    let v = json(&[
        "count", "--q", "2", "--steps", "6", "--flow", "pgl3", "--kind", "f", "--method", "oracle",
    ]);
    assert_eq!(rows(&v), pairs(&[(3, "24"), (6, "960")]));
    let v = json(&[
        "count", "--q", "2", "--steps", "4", "--flow", "pgl2", "--kind", "f", "--method", "closed",
    ]);
    assert_eq!(rows(&v), pairs(&[(2, "2"), (4, "4")]));
}

#[test]
fn counts_round_trip_as_decimal_text() {
    let v = json(&["count", "--q", "2", "--steps", "36", "--method", "closed"]);
    for (n, text) in rows(&v) {
        let parsed: BigUint = text.parse().unwrap();
        assert_eq!(parsed, closed_g(2, n));
    }
    // well past 2^63 at n = 36
    assert!(rows(&v).last().unwrap().1.len() > 19);
}

#[test]
fn n_profile_csv() {
    let (code, out, _) = geoflow(&[
        "count", "--q", "2", "--steps", "3", "--kind", "N", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "k2,l2,count\n1,0,24\n3,1,18\n4,3,12\n5,2,6\n6,1,3\n7,0,1\n"
    );
    let (_, closed, _) = geoflow(&[
        "count", "--q", "2", "--steps", "3", "--kind", "N", "--method", "closed", "--format", "csv",
    ]);
    assert_eq!(closed, out);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["count", "--q", "6"][..],
        &["count", "--q", "2", "--flow", "pgl2", "--method", "dp"],
        &["count", "--q", "2", "--steps", "0"],
        &["count", "--kind", "N", "--method", "oracle"],
        &["count", "--format", "dot"],
        &["graph", "--m-max", "1"],
        &["count", "--bogus"],
        &["entropy", "--q", "1"],
    ] {
        let (code, _, err) = geoflow(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn budget_refusal_exits_3() {
    let (code, out, err) = geoflow(&["count", "--q", "3", "--steps", "12", "--method", "oracle"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("budget"), "{err}");
    let (code, _, _) = geoflow(&[
        "count", "--q", "2", "--steps", "6", "--method", "oracle", "--budget", "100",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn validate_q2_passes() {
    let v = json(&["validate", "--q", "2", "--steps", "6", "--m-max", "5"]);
    assert_eq!(v["passed"], Value::Bool(true));
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, CHECKS);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass", "{c}");
    }
}

#[test]
fn validate_q3_passes() {
    let (code, out, err) = geoflow(&["validate", "--q", "3", "--steps", "6"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("all checks passed"));
}

#[test]
fn validate_marks_budget_refusals_skipped() {
    let v = json(&[
        "validate", "--q", "2", "--steps", "6", "--m-max", "4", "--budget", "1000",
    ]);
    assert_eq!(v["passed"], Value::Bool(true));
    let status = |name: &str| {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap()["status"]
            .clone()
    };
    assert_eq!(status("oracle-g"), "skipped");
    assert_eq!(status("closed-g"), "pass");
}

#[test]
fn perturbed_weight_fails_validation() {
    let cfg = CommonArgs {
        q: Some(2),
        steps: Some(6),
        m_max: Some(5),
        threads: Some(1),
        ..Default::default()
    }
    .resolve(Format::Human)
    .unwrap();
    let e = |k2, l2| QuotientEdge::from_doubled(k2, l2).unwrap();
    let fault = Fault {
        from: e(1, 1),
        to: e(1, 0),
        weight: 3,
    };
    let report = run_checks(&cfg, Some(fault)).unwrap();
    assert!(!report.passed());
    let census = report.check("weight-census").unwrap();
    assert_eq!(census.status, Status::Fail);
    assert!(
        census
            .detail
            .contains("e(1/2,1/2) -> e(1/2,0): oracle 4 fold-rule 3"),
        "{}",
        census.detail
    );
    assert_eq!(report.check("closed-g").unwrap().status, Status::Pass);

    let (code, out, _) = geoflow(&[
        "validate",
        "--steps",
        "6",
        "--m-max",
        "5",
        "--inject-fault",
        "1,1:1,0:5",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL  weight-census"));
    assert!(out.contains("e(1/2,1/2) -> e(1/2,0)"));
}

#[test]
fn entropy_reports() {
    let v = json(&["entropy", "--q", "2"]);
    assert_eq!(v["spr"], Value::Bool(true));
    assert_eq!(v["exact"]["h"], serde_json::json!([6, 0]));
    assert_eq!(v["exact"]["growth_f"], serde_json::json!([3, 1]));
    let num = |k: &str| v[k].as_f64().unwrap();
    assert!((num("h_nats") - 1.386294).abs() < 1e-6);
    assert!((num("growth_f_nats") - 1.229626).abs() < 1e-6);
    assert!((num("margin_nats") - 0.156668).abs() < 1e-6);
    assert!((num("paper_claimed_growth_nats") - 1.155245).abs() < 1e-6);
    assert!(v["note"].as_str().unwrap().contains("(5/3) log q"));

    assert_eq!(json(&["entropy", "--q", "3"])["spr"], Value::Bool(true));
    let v = json(&["entropy", "--q", "9"]);
    assert_eq!(v["spr"], Value::Bool(true));
    assert!((v["margin_nats"].as_f64().unwrap() - (729f64 / 89.0).ln() / 3.0).abs() < 1e-12);
}

#[test]
fn graph_export() {
    let (code, dot, _) = geoflow(&["graph", "--q", "2", "--m-max", "3"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph D {"));
    assert!(dot.contains("\"e(1/2,1/2)\" -> \"e(1/2,0)\" [label=\"4\"];"));
    let (_, again, _) = geoflow(&["graph", "--q", "2", "--m-max", "3"]);
    assert_eq!(dot, again);

    let v = json(&["graph", "--q", "2", "--m-max", "3"]);
    let edges = v["edges"].as_array().unwrap();
    let alphabet = ["1", "2", "3", "4"];
    let mut keys = Vec::new();
    for e in edges {
        assert!(alphabet.contains(&e["weight"].as_str().unwrap()), "{e}");
        let k = |x: &Value| (x["k2"].as_i64().unwrap(), x["l2"].as_i64().unwrap());
        keys.push((k(&e["from"]), k(&e["to"])));
    }
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.contains(&((1, 1), (1, 0))));
}

#[test]
fn oracle_weights_match_fold_rule() {
    let (code, fold, _) = geoflow(&["weights", "--q", "3", "--m-max", "4", "--format", "csv"]);
    assert_eq!(code, 0);
    let (code, oracle, _) = geoflow(&[
        "weights",
        "--q",
        "3",
        "--m-max",
        "4",
        "--format",
        "csv",
        "--from-oracle",
    ]);
    assert_eq!(code, 0);
    assert_eq!(fold, oracle);
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("geoflow-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(
        &path,
        "# example\nq = 3\nsteps = 6\nkind = f\nformat = csv\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = geoflow(&["count", "--config", p]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,count\n3,432\n6,128304\n");
    let (_, out, _) = geoflow(&["count", "--config", p, "--q", "2"]);
    assert_eq!(out, "n,count\n3,24\n6,960\n");
    std::fs::write(&path, "colour = red\n").unwrap();
    assert_eq!(geoflow(&["count", "--config", p]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_documents_doubled_indices() {
    let (code, out, _) = geoflow(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("doubled"));
    assert!(out.contains("Exit codes"));
}

#[test]
fn thread_count_does_not_change_output() {
    let a = geoflow(&[
        "count",
        "--q",
        "2",
        "--steps",
        "6",
        "--method",
        "oracle",
        "--threads",
        "1",
    ])
    .1;
    let b = geoflow(&[
        "count",
        "--q",
        "2",
        "--steps",
        "6",
        "--method",
        "oracle",
        "--threads",
        "4",
    ])
    .1;
    assert_eq!(a, b);
}
