#![allow(dead_code)]

use std::path::PathBuf;

use subarr::arrangement::Arrangement;
use subarr::cli::{parse_arrangement_file, run, Outcome};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_path(name: &str) -> String {
    corpus_dir().join(format!("{name}.json")).to_string_lossy().into_owned()
}

pub fn load(name: &str) -> Arrangement {
    let bytes = std::fs::read(corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse_arrangement_file(&bytes).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every corpus file name, sorted.
pub fn corpus_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .filter_map(|e| {
            let path = e.ok()?.path();
            (path.extension()? == "json").then_some(path.file_stem()?.to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

/// Runs `arr` in-process; `{name}` arguments starting with `@` resolve to corpus files.
pub fn arr(args: &[&str]) -> Outcome {
    let mut argv = vec!["arr".to_string()];
    for a in args {
        match a.strip_prefix('@') {
            Some(name) => argv.push(corpus_path(name)),
            None => argv.push(a.to_string()),
        }
    }
    run(argv)
}

pub fn arr_json(args: &[&str]) -> (serde_json::Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = arr(&full);
    assert!(out.code != 2, "{args:?} failed: {}", out.stderr);
    (serde_json::from_str(&out.stdout).expect("report is JSON"), out.code)
}
