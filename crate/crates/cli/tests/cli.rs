use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ktcol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktcol")).args(args).output().unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn v8_is_k5_minor_free() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "v8.json");
    assert_eq!(ktcol(&["gen", "--family", "v8", "-o", s(&g)]).status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["family"], "v8");
    assert_eq!(doc["metadata"]["certified_minor_free"], 5);

    let out = ktcol(&["check", "minor-free", "--t", "5", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "free");

    let out = ktcol(&["check", "minor-free", "--t", "4", s(&g)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["witness"]["branch_sets"].as_array().unwrap().len(), 4);
}

#[test]
fn necklace_is_locally_free_at_half_its_length() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "necklace.json");
    let gen = ktcol(&["gen", "--family", "necklace", "--t", "4", "--n", "5", "-o", s(&g)]);
    assert_eq!(gen.status.code(), Some(0));
    let out = ktcol(&["check", "local", "--t", "4", "--radius", "2", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "free");
    // the whole necklace is within radius 5 of vertex 0
    let out = ktcol(&["check", "local", "--t", "4", "--radius", "5", s(&g)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["vertex"], 0);
}

#[test]
fn colour_a_series_parallel_graph() {
    let dir = tempfile::tempdir().unwrap();
    let (g, l, phi, stats) = (
        path(dir.path(), "sp.json"),
        path(dir.path(), "lists.json"),
        path(dir.path(), "phi.json"),
        path(dir.path(), "stats.json"),
    );
    let gen = ktcol(&[
        "gen", "--family", "sp", "--n", "400", "--seed", "9", "-o", s(&g), "--lists", "4", "--lists-out", s(&l),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let out = ktcol(&["color", "--lists", s(&l), "--c", "4", s(&g), "-o", s(&phi), "--stats", s(&stats)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let st: Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(st["verified"], true);
    assert!(st["rounds"].as_u64().unwrap() > 0);
    let levels = st["levels"].as_array().unwrap();
    assert_eq!(levels[0]["remaining"], 400);
    let removed: u64 = levels.iter().map(|r| r["removed"].as_u64().unwrap()).sum();
    assert_eq!(removed, 400);

    let out = ktcol(&["verify", "--lists", s(&l), "--coloring", s(&phi), s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "ok");

    // copy vertex 0's colour onto a neighbour
    let (graph, _) = ktcol_core::io::graph_from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&phi).unwrap()).unwrap();
    let w = graph.neighbours(0)[0].to_string();
    doc["colors"][&w] = doc["colors"]["0"].clone();
    std::fs::write(&phi, doc.to_string()).unwrap();
    let out = ktcol(&["verify", "--lists", s(&l), "--coloring", s(&phi), s(&g)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "edge_conflict");
}

#[test]
fn failures_are_structured() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.json");
    let out = ktcol(&["gen", "--family", "planar", "--n", "30", "-o", s(&g)]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "invalid-parameter");
    assert!(!g.exists());

    std::fs::write(&g, r#"{"n":2,"edges":[[0,0]]}"#).unwrap();
    let out = ktcol(&["check", "minor-free", "--t", "4", s(&g)]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "parse");

    let out = ktcol(&["check", "minor-free", "--t", "7", s(&g)]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn lists_too_short_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let (g, l, phi) = (path(dir.path(), "g.json"), path(dir.path(), "l.json"), path(dir.path(), "phi.json"));
    ktcol(&["gen", "--family", "sp", "--n", "50", "--seed", "1", "-o", s(&g), "--lists", "3", "--lists-out", s(&l)]);
    let out = ktcol(&["color", "--lists", s(&l), "--c", "4", s(&g), "-o", s(&phi)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!phi.exists());
}

#[test]
fn scaling_experiment_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "e.json");
    std::fs::write(&cfg, r#"{"family":"sp","sizes":[64,128,256],"trials":2,"seed":5,"list_size":4}"#).unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    assert_eq!(ktcol(&["experiment", "scaling", "--config", s(&cfg), "-o", s(&a)]).status.code(), Some(0));
    assert_eq!(ktcol(&["experiment", "scaling", "--config", s(&cfg), "-o", s(&b)]).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let doc: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(doc["table"].as_array().unwrap().len(), 3);
    assert_eq!(doc["trials"].as_array().unwrap().len(), 6);
    assert!(doc["fit"]["a"].is_number() && doc["fit"]["b"].is_number());
}
