use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn motifs(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_motifs")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

fn write_k4(dir: &Path) -> String {
    let p = dir.join("k4.el");
    std::fs::write(&p, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    p.to_str().unwrap().to_string()
}

/// Rows of a CSV as maps from header to cell.
fn csv_rows(text: &str) -> Vec<std::collections::BTreeMap<String, String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines
        .map(|l| header.iter().map(|h| h.to_string()).zip(l.split(',').map(str::to_string)).collect())
        .collect()
}

#[test]
fn decompose_examples() {
    let (code, out, _) = motifs(&["decompose", "--motif", "K4"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["decomposition"]["rho"]["numerator"], 2);
    assert_eq!(v["decomposition"]["rho"]["denominator"], 1);
    assert_eq!(v["decomposition"]["shapes"], serde_json::json!(["S1", "S1"]));
    let v = json(&motifs(&["decompose", "--motif", "triangle"]).1);
    assert_eq!(v["decomposition"]["rho"], serde_json::json!({"numerator": 3, "denominator": 2}));
    let v = json(&motifs(&["decompose", "--motif", "S3"]).1);
    assert_eq!(v["decomposition"]["rho"], serde_json::json!({"numerator": 3, "denominator": 1}));
}

#[test]
fn sample_k4_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_k4(dir.path());
    let (code, out, err) = motifs(&["sample", "--graph", &k4, "--motif", "triangle", "--reps", "1000", "--seed", "1"]);
    assert_eq!(code, 0, "{err}");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1000);
    let copies: BTreeSet<&String> = rows.iter().map(|r| &r["copy"]).collect();
    assert_eq!(copies.len(), 4);
    assert!(rows.iter().all(|r| !r["copy"].is_empty() && r["seed"].parse::<u64>().is_ok()));
    assert!(rows.iter().all(|r| r["total"].parse::<u64>().unwrap() > 0));
}

#[test]
fn estimate_k4_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_k4(dir.path());
    let (code, out, err) = motifs(&[
        "estimate", "--graph", &k4, "--motif", "triangle", "--eps", "0.2", "--reps", "30", "--seed", "2", "--no-fallback",
    ]);
    assert_eq!(code, 0, "{err}");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 30);
    let inside = rows
        .iter()
        .filter(|r| (3.2..=4.8).contains(&r["estimate"].parse::<f64>().unwrap()))
        .count();
    assert!(inside * 3 >= rows.len() * 2, "{inside}/30");
}

#[test]
fn count_k4_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_k4(dir.path());
    let (code, out, _) = motifs(&["count", "--graph", &k4, "--motif", "triangle"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["count"], 4);
}

#[test]
fn gen_cc_lists_crucial_edges() {
    let (code, out, err) = motifs(&["gen", "--gadget", "cc", "--k", "3", "--side", "8", "--t", "2", "--seed", "3"]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    assert_eq!(v["crucial_edges"].as_array().unwrap().len(), 2);
    assert_eq!(v["achieved"]["O3"], 16);
    assert!(v["edge_list"].as_str().unwrap().lines().count() > 1);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cc.el");
    let (code, _, _) = motifs(&["gen", "--gadget", "cc", "--k", "3", "--side", "8", "--t", "2", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    for ext in ["el", "el.x", "el.y", "el.json"] {
        assert!(dir.path().join(format!("cc.{ext}")).exists(), "{ext}");
    }
    let (code, out, _) = motifs(&["count", "--graph", path.to_str().unwrap(), "--motif", "triangle"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["count"], 16);
}

#[test]
fn uniformity_reports_p_value() {
    let dir = tempfile::tempdir().unwrap();
    let er = dir.path().join("er.el");
    let (code, _, _) = motifs(&["gen", "--gadget", "er", "--n", "20", "--p", "0.2", "--seed", "4", "--out", er.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, err) = motifs(&["uniformity", "--graph", er.to_str().unwrap(), "--motif", "S2", "--n", "50000"]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    let p = v["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(v["config"]["seed"], 1);
    assert!(v["total_queries"].as_u64().unwrap() > 0);
}

#[test]
fn bench_three_scales() {
    let (code, out, err) = motifs(&["bench", "--family", "planted-triangles", "--scales", "3", "--reps", "4"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(csv_rows(&out).len(), 3);
    assert!(out.lines().any(|l| l.starts_with("# slope=")));
}

#[test]
fn reruns_are_identical() {
    let args = ["sample", "--graph", "er:25:0.3:5", "--motif", "paw", "--reps", "20", "--seed", "9"];
    assert_eq!(motifs(&args), motifs(&args));
    let args = ["estimate", "--graph", "er:25:0.3:5", "--motif", "S2", "--reps", "5", "--seed", "9", "--mode", "strict"];
    assert_eq!(motifs(&args), motifs(&args));
}

#[test]
fn exit_codes_and_error_records() {
    assert_eq!(motifs(&["--help"]).0, 0);
    assert_eq!(motifs(&["decompose"]).0, 2);
    let (code, _, err) = motifs(&["count", "--graph", "no/such/file.el", "--motif", "triangle"]);
    assert_eq!(code, 2);
    assert_eq!(json(err.trim())["code"], 2);
    assert_eq!(motifs(&["gen", "--gadget", "cc", "--side", "4", "--t", "20", "--seed", "1"]).0, 3);
    let (code, _, err) = motifs(&["sample", "--graph", "complete:4", "--motif", "triangle", "--budget", "2"]);
    assert_eq!(code, 4);
    assert_eq!(json(err.trim())["code"], 4);
}
