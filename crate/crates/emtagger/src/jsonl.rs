//! JSON Lines input and output.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use emtagger_core::RawTweet;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

/// Records skipped while reading raw posts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub malformed: u64,
    pub empty_id: u64,
    pub duplicate_id: u64,
}

impl IngestStats {
    pub fn skipped(&self) -> u64 {
        self.malformed + self.empty_id + self.duplicate_id
    }
}

/// Reads raw posts, skipping blank lines. Malformed records, empty ids and
/// repeated ids are counted and dropped with a warning.
pub fn read_raw_tweets(path: &Path) -> AppResult<(Vec<RawTweet>, IngestStats)> {
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    parse_raw_tweets(BufReader::new(file), path)
}

pub fn parse_raw_tweets(reader: impl BufRead, origin: &Path) -> AppResult<(Vec<RawTweet>, IngestStats)> {
    let mut stats = IngestStats::default();
    let mut seen = BTreeSet::new();
    let mut tweets = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| AppError::io(origin, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawTweet>(&line) {
            Err(e) => {
                log::warn!("{}:{}: skipping malformed record: {e}", origin.display(), n + 1);
                stats.malformed += 1;
            }
            Ok(t) if t.id.is_empty() => {
                log::warn!("{}:{}: skipping record with empty id", origin.display(), n + 1);
                stats.empty_id += 1;
            }
            Ok(t) if !seen.insert(t.id.clone()) => {
                log::warn!("{}:{}: skipping duplicate id {}", origin.display(), n + 1, t.id);
                stats.duplicate_id += 1;
            }
            Ok(t) => tweets.push(t),
        }
    }
    Ok((tweets, stats))
}

/// Reads one `T` per non-blank line; any bad line is an error.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> AppResult<Vec<T>> {
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| AppError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line)
            .map_err(|e| AppError::data(format!("{}:{}: {e}", path.display(), n + 1)))?;
        out.push(item);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> AppResult<()> {
    let file = File::create(path).map_err(|e| AppError::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(|e| AppError::Internal(e.to_string()))?;
        w.write_all(b"\n").map_err(|e| AppError::io(path, e))?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> AppResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| AppError::Internal(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| AppError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> AppResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| AppError::data(format!("{}: {e}", path.display())))
}
