use std::fmt::Write;
use std::path::Path;

use emtagger_core::corpus::SplitPart;
use emtagger_core::recommend::recommend as recommend_one;
use emtagger_core::{CleanTweet, Recommendation, TrainedModel};

use super::{current_hash, hash_mismatch, load_part, load_split_manifest};
use crate::bundle::{self, Manifest};
use crate::config::RunConfig;
use crate::error::AppResult;
use crate::jsonl;

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// One output line; scores and coverage carry six decimals. Unscorable
/// tweets get a null `best` and an empty list.
pub fn format_recommendation(id: &str, rec: Option<&Recommendation>) -> String {
    let mut line = format!("{{\"id\":{}", json_str(id));
    match rec {
        Some(r) => {
            write!(line, ",\"best\":{},\"ranked\":[", json_str(&r.best)).unwrap();
            for (i, (tag, score)) in r.ranked.iter().enumerate() {
                let sep = if i == 0 { "" } else { "," };
                write!(line, "{sep}[{},{score:.6}]", json_str(tag)).unwrap();
            }
            write!(line, "],\"coverage\":{:.6}}}", r.coverage).unwrap();
        }
        None => line.push_str(",\"best\":null,\"ranked\":[],\"coverage\":0.000000}"),
    }
    line
}

pub(super) fn load_checked_bundle(cfg: &RunConfig) -> AppResult<(TrainedModel, Manifest)> {
    let (model, manifest) = bundle::load(&cfg.bundle_dir())?;
    let current = current_hash(cfg)?;
    if manifest.config_hash != current {
        return Err(hash_mismatch("the model bundle", &manifest.config_hash, &current));
    }
    Ok((model, manifest))
}

/// Recommends `cfg.k` hashtags for each tweet of `input` (clean JSON Lines),
/// or of the test split when `input` is `None`. Returns JSON Lines.
pub fn recommend(cfg: &RunConfig, input: Option<&Path>) -> AppResult<String> {
    cfg.validate()?;
    let (model, _) = load_checked_bundle(cfg)?;
    let tweets: Vec<CleanTweet> = match input {
        Some(p) => jsonl::read_jsonl(p)?,
        None => load_part(cfg, &load_split_manifest(cfg)?, SplitPart::Test)?,
    };
    let mut out = String::new();
    for t in &tweets {
        let rec = recommend_one(&model, t, cfg.k, cfg.rank_scope).ok();
        out.push_str(&format_recommendation(&t.id, rec.as_ref()));
        out.push('\n');
    }
    Ok(out)
}
