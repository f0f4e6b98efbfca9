use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use weylres::arrangement::Arrangement;

fn weylres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylres")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

fn build(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["build"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = weylres(&all);
    assert!(o.status.success(), "build failed: {}", String::from_utf8_lossy(&o.stderr));
    path
}

fn boolean(dir: &Path) -> PathBuf {
    let path = dir.join("boolean.json");
    std::fs::write(&path, Arrangement::boolean(3).to_json()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_counts_hyperplanes() {
    let dir = TempDir::new().unwrap();
    // four positive roots of B2 times six translates, plus the cone hyperplane
    let b2 = build(dir.path(), "b2.json", &["--type", "B2", "--interval", "-1:4", "--cone"]);
    let a = Arrangement::from_json(&std::fs::read_to_string(&b2).unwrap()).unwrap();
    assert_eq!(a.len(), 4 * 6 + 1);
    // six roots of A3 times three translates, plus one
    let o = weylres(&["build", "--type", "A3", "--interval", "0:2", "--cone", "--format", "json"]);
    assert_eq!(json(&o)["hyperplanes"].as_array().unwrap().len(), 6 * 3 + 1);
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(weylres(&["build", "--type", "B2", "--interval", "3:1"]).status.code(), Some(2));
    assert_eq!(weylres(&["build", "--type", "C9", "--interval", "0:1"]).status.code(), Some(2));
    assert_eq!(weylres(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(weylres(&["verify", "b2-betti", "--k", "9"]).status.code(), Some(2));
}

#[test]
fn build_round_trips() {
    let dir = TempDir::new().unwrap();
    let p = build(dir.path(), "a.json", &["--type", "A3", "--interval", "-1:2", "--cone"]);
    let text = std::fs::read_to_string(&p).unwrap();
    let a = Arrangement::from_json(&text).unwrap();
    assert_eq!(a.to_json(), text.trim_end());
    assert_eq!(a, Arrangement::deformation(&"A3".parse().unwrap(), -1, 2).unwrap().cone().unwrap());
}

#[test]
fn boolean_reports() {
    let dir = TempDir::new().unwrap();
    let b = boolean(dir.path());
    let o = weylres(&["betti", s(&b)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("free, exp (1,1,1)"), "{}", stdout(&o));
    let o = weylres(&["chi", s(&b), "--format", "json"]);
    assert_eq!(json(&o)["coefficients"], serde_json::json!([1, -3, 3, -1]));
    let o = weylres(&["free", s(&b), "--format", "json"]);
    assert_eq!(json(&o)["freeness"]["exponents"], serde_json::json!([1, 1, 1]));
    assert_eq!(json(&o)["saito"]["passed"], Value::Bool(true));
}

/// Rows `degree -> counts` of the text table.
fn parse_text_table(text: &str) -> Vec<(usize, i64, usize)> {
    let mut lines = text.lines().skip_while(|l| !l.trim_start().starts_with("degree"));
    let header = lines.next().expect("table header");
    let columns = header.split_whitespace().count() - 1;
    let mut out = Vec::new();
    for line in lines.take_while(|l| l.trim_start().chars().next().is_some_and(|c| c == '-' || c.is_ascii_digit())) {
        let degree: i64 = line[..6].trim().parse().unwrap();
        for i in 0..columns {
            let cell = line.get(6 + 12 * i..6 + 12 * (i + 1)).unwrap_or("").trim();
            if !cell.is_empty() {
                out.push((i, degree, cell.parse().unwrap()));
            }
        }
    }
    out
}

fn json_table(v: &Value) -> Vec<(usize, i64, usize)> {
    v["betti"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["i"].as_u64().unwrap() as usize, e["degree"].as_i64().unwrap(), e["count"].as_u64().unwrap() as usize))
        .collect()
}

#[test]
fn a3_table_text_and_json_agree() {
    let dir = TempDir::new().unwrap();
    let p = build(dir.path(), "a3.json", &["--type", "A3", "--interval", "0:2", "--cone"]);
    let text = stdout(&weylres(&["betti", s(&p)]));
    let mut from_text = parse_text_table(&text);
    from_text.sort();
    assert_eq!(from_text, vec![(0, 7, 6), (1, 8, 3)]);
    let mut from_json = json_table(&json(&weylres(&["betti", s(&p), "--format", "json"])));
    from_json.sort();
    assert_eq!(from_text, from_json);
}

#[test]
fn b2_table_with_oracle() {
    let dir = TempDir::new().unwrap();
    let p = build(dir.path(), "b2.json", &["--type", "B2", "--interval", "0:3", "--cone"]);
    let o = weylres(&["betti", s(&p), "--oracle", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["oracle"]["agrees"], Value::Bool(true));
    let mut t = json_table(&v);
    t.sort();
    assert_eq!(t, vec![(0, 9, 2), (0, 10, 2), (1, 11, 2)]);
    let o = weylres(&["betti", s(&p), "--module", "d", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn b2_start_is_free() {
    let dir = TempDir::new().unwrap();
    let p = build(dir.path(), "b2cat.json", &["--family", "b2-start", "--k", "0", "--j", "2"]);
    let o = weylres(&["free", s(&p)]);
    assert!(stdout(&o).starts_with("free, exp (1,5,7)"), "{}", stdout(&o));
}

#[test]
fn jump_reports_maximal_order() {
    let dir = TempDir::new().unwrap();
    let p = build(dir.path(), "b2.json", &["--type", "B2", "--interval", "-1:4", "--cone"]);
    let o = weylres(&["jump", s(&p), "--max-order", "10", "--format", "json", "--random-lines", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // k = 1, j = 3
    assert_eq!(v["max_order"], 2);
    assert_eq!(v["reports"].as_array().unwrap().len(), 25 + 20);
    let o = weylres(&["jump", s(&p), "--max-order", "1", "--random-lines", "0"]);
    assert_eq!(o.status.code(), Some(4));
}

fn strip_timing(v: &mut Value) {
    for r in v["results"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("elapsed_ms");
    }
}

#[test]
fn verify_tasks() {
    let o = weylres(&["verify", "a3-resolution", "--k", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS a3-resolution k=0"));

    let o = weylres(&["verify", "b2-jumping", "--k", "1", "--j", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let mut v = json(&o);
    assert_eq!(v["results"][0]["evidence"]["jumping_lines"], serde_json::json!(["y=4z", "y=-2z"]));

    let again = weylres(&["verify", "b2-jumping", "--k", "1", "--j", "3", "--format", "json"]);
    let mut w = json(&again);
    strip_timing(&mut v);
    strip_timing(&mut w);
    assert_eq!(v, w);

    let o = weylres(&["verify", "b2-distinct", "--k", "0", "--kprime", "1", "--j", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let e = &json(&o)["results"][0]["evidence"];
    assert_eq!(e["shifted_equal"], Value::Bool(true));
    assert_eq!(e["disjoint"], Value::Bool(true));
}

#[test]
fn field_modes() {
    let dir = TempDir::new().unwrap();
    let b = boolean(dir.path());
    assert_eq!(weylres(&["betti", s(&b), "--field", "fp:32003"]).status.code(), Some(2));
    assert_eq!(weylres(&["betti", s(&b), "--field", "fp:13", "--probabilistic"]).status.code(), Some(2));
    let o = weylres(&["betti", s(&b), "--field", "fp:32003", "--probabilistic", "--format", "json"]);
    assert_eq!(json(&o)["probabilistic"], Value::Bool(true));
    let o = weylres(&["verify", "b2-chern", "--k", "0", "--j", "3", "--field", "fp:2147483647", "--probabilistic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("probabilistic"));
}

#[test]
fn resource_caps_truncate() {
    let o = weylres(&["verify", "b2-betti", "--k", "0", "--j", "2", "--max-gb-steps", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(json(&o)["results"][0]["status"], "truncated");
}

#[test]
fn output_file() {
    let dir = TempDir::new().unwrap();
    let b = boolean(dir.path());
    let out = dir.path().join("chi.txt");
    let o = weylres(&["chi", s(&b), "-o", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("chi: [1, -3, 3, -1]"));
}
