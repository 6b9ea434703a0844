//! The pipeline stages behind each subcommand.
//!
//! Working directory layout:
//!
//! ```text
//! <workdir>/corpus/{train,validation,test}.jsonl
//! <workdir>/corpus/split.json
//! <workdir>/corpus/funnel.json
//! <workdir>/model/            default bundle directory
//! <workdir>/lda/model.json    cached baseline model
//! <workdir>/reports/
//! ```

mod baseline;
mod evaluate;
mod preprocess;
mod recommend;
mod sweep;
mod train;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use emtagger_core::corpus::SplitPart;
use emtagger_core::CleanTweet;
use serde::{Deserialize, Serialize};

pub use baseline::{baseline, load_or_train_lda, BaselineReport};
pub use evaluate::{evaluate, lift_report, EvalOptions, EvalSummary, LiftReport};
pub use preprocess::{preprocess, FunnelReport, FunnelRow};
pub use recommend::{format_recommendation, recommend};
pub use sweep::{sweep, SweepRow};
pub use train::{train, TrainOptions};

use crate::config::{config_hash, RunConfig};
use crate::error::{AppError, AppResult};
use crate::jsonl;

/// Which split each tweet went to, and under which preprocessing config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub config_hash: String,
    pub seed: u64,
    pub assignments: BTreeMap<String, SplitPart>,
}

pub fn part_name(part: SplitPart) -> &'static str {
    match part {
        SplitPart::Train => "train",
        SplitPart::Validation => "validation",
        SplitPart::Test => "test",
    }
}

pub fn part_path(cfg: &RunConfig, part: SplitPart) -> PathBuf {
    cfg.corpus_dir().join(format!("{}.jsonl", part_name(part)))
}

pub fn split_manifest_path(cfg: &RunConfig) -> PathBuf {
    cfg.corpus_dir().join("split.json")
}

pub fn reports_dir(cfg: &RunConfig) -> PathBuf {
    cfg.workdir().join("reports")
}

pub fn current_hash(cfg: &RunConfig) -> AppResult<String> {
    Ok(config_hash(&cfg.pipeline_config()?))
}

fn hash_mismatch(what: &str, found: &str, expected: &str) -> AppError {
    AppError::data(format!(
        "config hash mismatch: {what} was produced under {found}, current preprocessing config is {expected}"
    ))
}

/// Reads the split manifest and checks it against the running config.
pub fn load_split_manifest(cfg: &RunConfig) -> AppResult<SplitManifest> {
    let path = split_manifest_path(cfg);
    if !path.exists() {
        return Err(AppError::data(format!("{} not found; run preprocess first", path.display())));
    }
    let manifest: SplitManifest = jsonl::read_json(&path)?;
    let current = current_hash(cfg)?;
    if manifest.config_hash != current {
        return Err(hash_mismatch("the corpus split", &manifest.config_hash, &current));
    }
    Ok(manifest)
}

/// Loads one split part, checking every tweet against the manifest.
pub fn load_part(cfg: &RunConfig, manifest: &SplitManifest, part: SplitPart) -> AppResult<Vec<CleanTweet>> {
    let path = part_path(cfg, part);
    let tweets: Vec<CleanTweet> = jsonl::read_jsonl(&path)?;
    let expected = manifest.assignments.values().filter(|&&p| p == part).count();
    let consistent = tweets.len() == expected && tweets.iter().all(|t| manifest.assignments.get(&t.id) == Some(&part));
    if !consistent {
        return Err(AppError::data(format!("{} disagrees with the split manifest", path.display())));
    }
    Ok(tweets)
}

fn ensure_dir(dir: &Path) -> AppResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> AppResult<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                ensure_dir(parent)?;
            }
            std::fs::write(p, text).map_err(|e| AppError::io(p, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| AppError::Internal(e.to_string()))
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
