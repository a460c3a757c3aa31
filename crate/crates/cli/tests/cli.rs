use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn vcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcolor")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Runs `construct` and saves its output as a polytope file.
fn construct(dir: &Path, name: &str, product: &[&str]) -> PathBuf {
    let mut args = vec!["construct", "--product"];
    args.extend_from_slice(product);
    let out = vcolor(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let path = dir.join(name);
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn construct_prism() {
    let out = vcolor(&["construct", "--product", "simplex:3", "simplex:1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim"], 4);
    assert_eq!(v["f_vector"], serde_json::json!([8, 16, 14, 6]));
    assert_eq!(v["meta"]["tool"], "vcolor");
}

#[test]
fn simplex_is_a_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "s4.json", &["simplex:4"]);
    let out = vcolor(&["check-sphere", "--polytope", p.to_str().unwrap(), "--coloring", "identity"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["sphere"], true);
    let digest = v["meta"]["inputs"][p.to_str().unwrap()].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}

#[test]
fn cube_has_no_subcomplexes() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "c4.json", &["cube:4"]);
    let out = vcolor(&["enumerate", "--polytope", p.to_str().unwrap(), "--kind", "3,4,5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(json(&out)["count"], 0);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"dim\": 3,\n").unwrap();
    let out = vcolor(&["betti", "--polytope", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn five_dimensional_topology_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "s5.json", &["simplex:5"]);
    let out = vcolor(&["check-sphere", "--polytope", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unsupported-dimension"));
    // combinatorial verbs still work
    let out = vcolor(&["betti", "--polytope", p.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn tampered_bundle_names_the_entry() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    let out = vcolor(&["catalog", "--export", bundle.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(json(&out)["first_failure"].is_null());

    let ok = vcolor(&["catalog", "--verify-bundle", bundle.to_str().unwrap()]);
    assert!(ok.status.success());

    let mut v: Value = serde_json::from_slice(&std::fs::read(&bundle).unwrap()).unwrap();
    let name = v["entries"][3]["name"].as_str().unwrap().to_owned();
    v["entries"][3]["defining_faces"] = serde_json::json!([[0, 1]]);
    std::fs::write(&bundle, v.to_string()).unwrap();
    let bad = vcolor(&["catalog", "--verify-bundle", bundle.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(json(&bad)["failure"].as_str().unwrap().starts_with(&name));
}

#[test]
fn jobs_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "prism.json", &["simplex:3", "simplex:1"]);
    let run = |j: &str| {
        let out = vcolor(&["enumerate", "--polytope", p.to_str().unwrap(), "--kind", "4,5", "--jobs", j]);
        assert!(out.status.success());
        json(&out)
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(a, b);
    assert_eq!(a["count"], 24);
}

#[test]
fn defining_face_reports() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "prism.json", &["simplex:3", "simplex:1"]);
    let p = p.to_str().unwrap();
    let out = vcolor(&["fvector-check", "--polytope", p, "--faces", "0,4 1,5"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["holds"], true);

    let out = vcolor(&["branch-set", "--polytope", p, "--faces", "0,4"]);
    let v = json(&out);
    assert_eq!(v["kind"], 5);
    assert_eq!(v["consistent"], true);

    let out = vcolor(&["branch-set", "--polytope", p, "--faces", "0,1,2", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn four_coloring_a_cube() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "c3.json", &["cube:3"]);
    let out = vcolor(&["four-color", "--polytope", p.to_str().unwrap(), "--coloring", "opposite-pairs", "--tau", "110"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["check"], true);
    assert_eq!(v["cycles"].as_array().unwrap().len(), 2);
}

#[test]
fn dot_output_for_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "prism.json", &["simplex:3", "simplex:1"]);
    let out = vcolor(&["enumerate", "--polytope", p.to_str().unwrap(), "--kind", "5", "--format", "dot"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("graph"));
}

#[test]
fn geometry_report_lists_every_geometry() {
    let out = vcolor(&["geometry-report"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 10);
}
