#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use ucca_refine::corpus::{write_passage, write_refinement_file};
use ucca_refine::stats::Corpus;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Writes passages to `dir/passages` and sidecars to `dir/refs`.
pub fn write_corpus(dir: &Path, corpus: &Corpus) -> (PathBuf, PathBuf) {
    let passages = dir.join("passages");
    let refs = dir.join("refs");
    std::fs::create_dir_all(&passages).unwrap();
    std::fs::create_dir_all(&refs).unwrap();
    for p in &corpus.passages {
        std::fs::write(
            passages.join(format!("{}.xml", p.id())),
            write_passage(p).unwrap(),
        )
        .unwrap();
    }
    for doc in corpus.refinements.values() {
        write_refinement_file(&refs, doc).unwrap();
    }
    (passages, refs)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built binary.
pub fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ucca-refine"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Integer values of the `measure<TAB>value` rows of delimited `stats`.
pub fn measure(stdout: &str, name: &str) -> i64 {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{name}\t")))
        .unwrap_or_else(|| panic!("no row '{name}' in\n{stdout}"))
        .split('\t')
        .next_back()
        .unwrap()
        .parse()
        .unwrap()
}
