use std::path::Path;

use emtagger_core::corpus::{self, Cleaner, Funnel, SplitPart};
use serde::{Deserialize, Serialize};

use super::{ensure_dir, part_path, split_manifest_path, SplitManifest};
use crate::config::{config_hash, RunConfig};
use crate::error::{AppError, AppResult};
use crate::jsonl::{self, IngestStats};
use crate::stemmer::Porter2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunnelRow {
    pub criterion: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunnelReport {
    pub config_hash: String,
    pub rows: Vec<FunnelRow>,
    /// Input records dropped before cleaning; not part of the total.
    pub skipped_records: IngestStats,
}

/// Cleans, filters and splits the raw corpus into the working directory.
pub fn preprocess(cfg: &RunConfig, input: &Path) -> AppResult<FunnelReport> {
    let pipeline = cfg.pipeline_config()?;
    let hash = config_hash(&pipeline);
    let (raw, skipped_records) = jsonl::read_raw_tweets(input)?;
    if raw.is_empty() {
        return Err(AppError::data(format!("{}: no usable records", input.display())));
    }

    let stemmer = Porter2::new();
    let cleaner = Cleaner::new(&pipeline, &stemmer);
    let mut funnel = Funnel::default();
    let mut clean = Vec::new();
    for tweet in &raw {
        let outcome = cleaner.clean(tweet);
        funnel.record(&outcome);
        if let Ok(t) = outcome {
            clean.push(t);
        }
    }
    let filtered = corpus::filter_by_hashtag_frequency(clean, &pipeline);
    let n_filtered = filtered.len();
    if filtered.is_empty() {
        return Err(AppError::data(format!(
            "no tweet keeps a hashtag with {}-{} occurrences",
            pipeline.min_hashtag_freq, pipeline.max_hashtag_freq
        )));
    }
    let split = corpus::split(filtered, &pipeline)?;
    funnel.record_split(n_filtered, &split);

    ensure_dir(&cfg.corpus_dir())?;
    for part in [SplitPart::Train, SplitPart::Validation, SplitPart::Test] {
        jsonl::write_jsonl(&part_path(cfg, part), split.part(part))?;
    }
    let manifest = SplitManifest { config_hash: hash.clone(), seed: split.seed, assignments: split.assignments() };
    jsonl::write_json(&split_manifest_path(cfg), &manifest)?;
    let report = FunnelReport {
        config_hash: hash,
        rows: funnel.rows(&pipeline).into_iter().map(|(criterion, count)| FunnelRow { criterion, count }).collect(),
        skipped_records,
    };
    jsonl::write_json(&cfg.corpus_dir().join("funnel.json"), &report)?;
    Ok(report)
}
