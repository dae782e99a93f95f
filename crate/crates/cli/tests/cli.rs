use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn dimerbfz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimerbfz")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

const EXAMPLE: [&str; 4] = ["--type", "A3", "--u", "3 2 1 2 3"];

#[test]
fn build_example_json() {
    let out = dimerbfz(&[&["build"], &EXAMPLE[..]].concat());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["quiver"]["vertices"].as_array().unwrap().len(), 8);
    assert_eq!(v["quiver"]["arrows"].as_array().unwrap().len(), 13);
    assert_eq!(v["layout"]["branches"], json!([[1, 2, 3]]));
}

#[test]
fn build_a1() {
    let v = stdout_json(&dimerbfz(&["build", "--type", "A1"]));
    assert_eq!(v["quiver"]["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(v["quiver"]["arrows"].as_array().unwrap().len(), 0);
}

#[test]
fn dot_matches_json() {
    let args = ["--type", "D4", "--u", "2 1 3 4 2"];
    let v = stdout_json(&dimerbfz(&[&["build"], &args[..]].concat()));
    let dot = String::from_utf8(dimerbfz(&[&["build", "--format", "dot"], &args[..]].concat()).stdout).unwrap();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
    assert_eq!(edges, v["quiver"]["arrows"].as_array().unwrap().len());
    assert_eq!(nodes, v["quiver"]["vertices"].as_array().unwrap().len());
    let tikz = String::from_utf8(dimerbfz(&[&["build", "--format", "tikz"], &args[..]].concat()).stdout).unwrap();
    assert!(tikz.starts_with("\\begin{tikzpicture}"));
    assert_eq!(tikz.matches("\\begin{scope}").count(), 3);
}

#[test]
fn repeated_runs_are_identical() {
    let args = [&["build"], &EXAMPLE[..], &["--v", "1 2"]].concat();
    let a = dimerbfz(&args);
    let b = dimerbfz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = [&["rigidity"], &EXAMPLE[..]].concat();
    assert_eq!(dimerbfz(&r).stdout, dimerbfz(&r).stdout);
}

#[test]
fn verify_example() {
    let out = dimerbfz(&[&["verify"], &EXAMPLE[..]].concat());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for key in ["arrow_projection", "face_projection", "face_orientation", "face_shape", "euler"] {
        assert_eq!(v[key]["pass"], json!(true), "{key}");
    }
}

#[test]
fn verify_identity_cell() {
    for t in ["A1", "A3", "D4"] {
        assert_eq!(dimerbfz(&["verify", "--type", t]).status.code(), Some(0), "{t}");
    }
}

#[test]
fn verify_rejects_string_skipping_arrow() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = stdout_json(&dimerbfz(&[&["build"], &EXAMPLE[..]].concat()));
    // -1 sits on string 1 and -3 on string 3; nothing may join them directly.
    v["quiver"]["arrows"]
        .as_array_mut()
        .unwrap()
        .push(json!({"id": 13, "src": -1, "tgt": -3, "kind": "other"}));
    let path = write(dir.path(), "bad.json", &v);
    let out = dimerbfz(&["verify", "--quiver", &path]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["arrow_projection"]["pass"], json!(false));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        vec!["build", "--type", "X9"],
        vec!["build", "--type", "A2", "--u", "1 1"],
        vec!["build", "--type", "A2", "--u", "3"],
        vec!["verify", "--quiver", "/nonexistent.json"],
    ] {
        let out = dimerbfz(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(dimerbfz(&["verify", "--quiver", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn rigidity_example() {
    let out = dimerbfz(&[&["rigidity"], &EXAMPLE[..]].concat());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rigid"], json!(true));
    assert_eq!(v["certificates"].as_array().unwrap().len(), v["cycles_total"].as_u64().unwrap() as usize);
}

#[test]
fn rigidity_a2_single_cycle() {
    let v = stdout_json(&dimerbfz(&["rigidity", "--type", "A2", "--u", "1 2 1"]));
    assert_eq!(v["rigid"], json!(true));
    assert_eq!(v["cycles_total"], json!(1));
    assert_eq!(v["certificates"].as_array().unwrap().len(), 1);
}

fn two_triangles() -> Value {
    let arrows: Vec<Value> = [(1, 2), (2, 4), (4, 1), (1, 3), (3, 4)]
        .iter()
        .enumerate()
        .map(|(id, (s, t))| json!({"id": id, "src": s, "tgt": t}))
        .collect();
    json!({"vertices": (1..=4).map(|id| json!({"id": id})).collect::<Vec<_>>(), "arrows": arrows})
}

#[test]
fn rigidity_of_hand_potentials() {
    let dir = tempfile::tempdir().unwrap();
    let q = write(dir.path(), "q.json", &two_triangles());
    let s1 = write(dir.path(), "s1.json", &json!({"terms": [{"coefficient": "1", "arrows": [0, 1, 2]}]}));
    let out = dimerbfz(&["rigidity", "--quiver", &q, "--potential", &s1]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["rigid"], json!(false));
    assert_eq!(v["failures"].as_array().unwrap().len(), 1);

    let s2 = write(
        dir.path(),
        "s2.json",
        &json!({"terms": [{"coefficient": "1", "arrows": [0, 1, 2]}, {"coefficient": "1", "arrows": [2, 3, 4]}]}),
    );
    let out = dimerbfz(&["rigidity", "--quiver", &q, "--potential", &s2]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["rigid"], json!(true));

    assert_eq!(dimerbfz(&["rigidity", "--quiver", &q]).status.code(), Some(2));
}

#[test]
fn built_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = [&["build"], &EXAMPLE[..], &["--v", "2", "--interleave", "000100"]].concat();
    let built = dimerbfz(&args);
    assert_eq!(built.status.code(), Some(0), "{}", String::from_utf8_lossy(&built.stderr));
    let v = stdout_json(&built);
    let path = write(dir.path(), "cell.json", &v);
    let direct = dimerbfz(&[&["verify"], &args[1..]].concat());
    let from_file = dimerbfz(&["verify", "--quiver", &path]);
    assert_eq!(direct.stdout, from_file.stdout);
    let r1 = dimerbfz(&[&["rigidity"], &args[1..]].concat());
    let r2 = dimerbfz(&["rigidity", "--quiver", &path]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn mutate_save_and_load() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("s.json");
    let saved = saved.to_str().unwrap();
    let once = dimerbfz(&[&["mutate"], &EXAMPLE[..], &["--at", "2", "--at", "-1", "--save", saved]].concat());
    assert_eq!(once.status.code(), Some(0), "{}", String::from_utf8_lossy(&once.stderr));
    assert_eq!(stdout_json(&once)["history"], json!([2, -1]));

    let more = dimerbfz(&["mutate", "--load", saved, "--at", "-2"]);
    let straight = dimerbfz(&[&["mutate"], &EXAMPLE[..], &["--at", "2", "--at", "-1", "--at", "-2"]].concat());
    assert_eq!(more.stdout, straight.stdout);

    // Undoing both steps returns the initial seed.
    let back = stdout_json(&dimerbfz(&["mutate", "--load", saved, "--at", "-1", "--at", "2"]));
    let fresh = stdout_json(&dimerbfz(&[&["mutate"], &EXAMPLE[..]].concat()));
    assert_eq!(back["seed"], fresh["seed"]);

    let frozen = dimerbfz(&["mutate", "--load", saved, "--at", "3"]);
    assert_eq!(frozen.status.code(), Some(2));

    let mut tampered = stdout_json(&once);
    tampered["history"] = json!([2]);
    let path = write(dir.path(), "t.json", &tampered);
    assert_eq!(dimerbfz(&["mutate", "--load", &path]).status.code(), Some(2));
}

#[test]
fn sweep_small() {
    let out = dimerbfz(&["sweep", "--type", "A2", "--max-len", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["instances"].as_array().unwrap().len(), 6);
    let seq = dimerbfz(&["sweep", "--type", "A2", "--max-len", "3", "--sequential"]);
    assert_eq!(seq.stdout, out.stdout);
}
