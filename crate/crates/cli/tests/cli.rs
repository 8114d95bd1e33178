use std::path::{Path, PathBuf};
use std::process::Command;

use locus_core::{continuous_diameter, fixtures, Network};
use serde_json::Value;

fn write_net(dir: &Path, name: &str, net: &Network) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, net.to_json_string()).unwrap();
    p
}

fn locus(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_locus")).args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v = if text.trim().is_empty() { Value::Null } else { serde_json::from_str(&text).unwrap() };
    (out.status.code().unwrap(), v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn diameter_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    for (name, net) in [("square.json", fixtures::square1()), ("k4.json", fixtures::k4a()), ("star.json", fixtures::star5())] {
        let f = write_net(dir.path(), name, &net);
        let (code, v) = locus(&["diameter", path_str(&f)]);
        assert_eq!(code, 0);
        let lib = locus_cli::output::to_value(&continuous_diameter(&net).unwrap());
        assert_eq!(v, lib);
    }
    let (_, v) = locus(&["diameter", path_str(&write_net(dir.path(), "sq.json", &fixtures::square1()))]);
    assert_eq!(v["d"], 2.0);
}

#[test]
fn straight_path_refuses() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_net(dir.path(), "path.json", &fixtures::straight_path());
    let (code, v) = locus(&["check", path_str(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["admits"], false);
    let (code, v) = locus(&["fan", path_str(&f)]);
    assert_eq!(code, 1);
    assert!(v["error"]["kind"].is_string());
}

#[test]
fn pocket_shortcut_is_found() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_net(dir.path(), "pocket.json", &fixtures::pocket1());
    let (code, v) = locus(&["shortcut", path_str(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "FOUND");
    let (_, v) = locus(&["polygon", path_str(&f)]);
    assert_eq!(v["scn"], 1);
    assert_eq!(v["verification"]["is_shortcut_set"], true);
}

#[test]
fn family_commands() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write_net(dir.path(), "k4.json", &fixtures::k4a());
    let (code, v) = locus(&["k4", path_str(&k4)]);
    assert_eq!(code, 0);
    assert_eq!(v["verification"]["is_shortcut_set"], true);
    let sq = write_net(dir.path(), "sq.json", &fixtures::square1());
    let (_, v) = locus(&["polygon", path_str(&sq)]);
    assert_eq!(v["scn"], 2);
    let (code, v) = locus(&["epsilon", path_str(&sq), "--eps", "0.4"]);
    assert_eq!(code, 0);
    assert!(v["verification"]["new_d"].as_f64().unwrap() < 2f64.sqrt() + 0.4);
    let (code, v) = locus(&["epsilon", path_str(&sq), "--eps", "0.9"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "HypothesisViolated");
}

#[test]
fn disconnected_bridge() {
    let dir = tempfile::tempdir().unwrap();
    let net = Network::from_json_str(
        r#"{"vertices":[{"id":1,"x":"0","y":"0"},{"id":2,"x":"1","y":"0"},{"id":3,"x":"0","y":"1"},{"id":4,"x":"1","y":"1"}],"edges":[[1,2],[3,4]]}"#,
    )
    .unwrap();
    let f = write_net(dir.path(), "two.json", &net);
    let (code, v) = locus(&["scn1", path_str(&f)]);
    assert_eq!(code, 0);
    assert_eq!(v["yes"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 1);
    let sq = write_net(dir.path(), "sq.json", &fixtures::square1());
    let (code, v) = locus(&["scn1", path_str(&sq)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "Connected");
}

#[test]
fn malformed_input_is_a_user_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"vertices\": 3}").unwrap();
    let (code, v) = locus(&["diameter", path_str(&f)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "Malformed");
    let (code, v) = locus(&["diameter", "/nonexistent/file.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "Io");
}

#[test]
fn gadget_generation() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("phi.cnf");
    std::fs::write(&cnf, "p cnf 2 2\n1 1 2 0\n-1 2 2 0\n").unwrap();
    let side = dir.path().join("prov.json");
    let (code, v) = locus(&["gen3sat", path_str(&cnf), "--seed", "5", "--provenance", path_str(&side)]);
    assert_eq!(code, 0);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 10);
    assert!(v["edges"].as_array().unwrap().is_empty());
    let prov: Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert!(prov["violations"].as_array().unwrap().is_empty());
    std::fs::write(&cnf, "1 2 0\n").unwrap();
    let (code, v) = locus(&["gen3sat", path_str(&cnf)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "MalformedCnf");
}

/// Minimal well-formedness: every opened tag is closed in order.
fn balanced(xml: &str) -> bool {
    let mut stack = Vec::new();
    let mut rest = xml;
    while let Some(i) = rest.find('<') {
        let Some(j) = rest[i..].find('>') else { return false };
        let tag = &rest[i + 1..i + j];
        rest = &rest[i + j + 1..];
        if tag.starts_with('?') || tag.ends_with('/') {
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            if stack.pop() != Some(name.to_string()) {
                return false;
            }
        } else {
            stack.push(tag.split_whitespace().next().unwrap_or("").to_string());
        }
    }
    stack.is_empty()
}

#[test]
fn render_with_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_net(dir.path(), "pocket.json", &fixtures::pocket1());
    let (_, v) = locus(&["polygon", path_str(&f)]);
    let overlay = dir.path().join("overlay.json");
    std::fs::write(&overlay, serde_json::to_string(&v).unwrap()).unwrap();
    let out = dir.path().join("out.svg");
    let (code, _) = locus(&["render", path_str(&f), "--overlay", path_str(&overlay), "-o", path_str(&out)]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(balanced(&svg));
    assert!(svg.contains(r#"class="shortcut""#));
    assert!(svg.contains(r#"class="diametral""#));
}
