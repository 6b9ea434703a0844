#![allow(dead_code)]

use std::path::{Path, PathBuf};

use emtagger_core::synthetic::{generate, SyntheticSpec};

/// Runs the CLI in-process and returns its exit code.
pub fn run(args: &[&str]) -> i32 {
    emtagger::cli::main_with(std::iter::once("emtagger").chain(args.iter().copied()))
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn small_spec(n_tweets: usize) -> SyntheticSpec {
    SyntheticSpec { n_tweets, n_hashtags: 6, words_per_hashtag: 12, noise_words: 6, ..SyntheticSpec::default() }
}

/// Writes a raw synthetic corpus and a matching config into `dir`.
/// Returns the config path; the workdir is `dir/work`.
pub fn synthetic_workspace(dir: &Path, spec: &SyntheticSpec, seed: u64, extra: &str) -> PathBuf {
    let raw = generate(spec, seed).raw_tweets();
    let lines: Vec<String> = raw.iter().map(|t| serde_json::to_string(t).unwrap()).collect();
    std::fs::write(dir.join("raw.jsonl"), lines.join("\n") + "\n").unwrap();
    let config = format!(
        r#"
{extra}

[pipeline]
min_hashtag_freq = 1
max_hashtag_freq = 1000000
seed = {seed}

[train]
dim = 12
epochs = 2
seed = {seed}

[lda]
n_topics = 8
iterations = 40
fold_in_iterations = 20
seed = {seed}

[paths]
input = "raw.jsonl"
workdir = "work"
"#
    );
    let path = dir.join("run.toml");
    std::fs::write(&path, config).unwrap();
    path
}

/// Runs the CLI from inside `dir`, so relative config paths resolve there.
pub fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_emtagger"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    if !status.status.success() {
        eprintln!("{}", String::from_utf8_lossy(&status.stderr));
    }
    status.status.code().unwrap()
}

/// Runs the binary in `dir` and captures stdout, stderr and exit code.
pub fn run_capture(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_emtagger"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
