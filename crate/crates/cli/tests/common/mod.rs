#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn graphdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphdim"))
        .args(args)
        .output()
        .expect("spawn graphdim")
}

pub fn graphdim_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphdim"))
        .args(args)
        .env(key, value)
        .output()
        .expect("spawn graphdim")
}

/// Stdout of a successful run.
pub fn ok(args: &[&str]) -> String {
    let out = graphdim(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Exit code and stderr of a failing run.
pub fn fails(args: &[&str]) -> (i32, String) {
    let out = graphdim(args);
    assert!(!out.status.success(), "{args:?} should fail");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn config_path(name: &str) -> PathBuf {
    crate_dir().join("configs").join(name)
}

pub fn assert_valid(schema: &str, instance: &Value) {
    let path = crate_dir().join("schema").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = v
        .iter_errors(instance)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(
        errors.is_empty(),
        "{} violations: {errors:#?}\n{instance:#}",
        path.display()
    );
}

pub fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"))
}

/// Parse a CSV with a header; returns header and rows.
pub fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("header row")
        .split(',')
        .map(String::from)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}
