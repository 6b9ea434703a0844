use emtagger_core::corpus::SplitPart;
use emtagger_core::eval::{eval_metric, predict_with, truth_of, EvalReport, Metric};
use emtagger_core::lda::{lda_train, LdaRecommender};
use emtagger_core::{CleanTweet, LdaConfig, LdaModel};
use serde::{Deserialize, Serialize};

use super::{ensure_dir, load_part, load_split_manifest, part_name, pretty, reports_dir, emit};
use crate::config::RunConfig;
use crate::error::AppResult;
use crate::jsonl;

#[derive(Serialize, Deserialize)]
struct LdaCache {
    config_hash: String,
    lda: LdaConfig,
    model: LdaModel,
}

/// Reuses `<workdir>/lda/model.json` when it was trained on the same split
/// with the same settings, otherwise trains and caches a new model.
pub fn load_or_train_lda(cfg: &RunConfig, train: &[CleanTweet], config_hash: &str) -> AppResult<LdaModel> {
    let dir = cfg.workdir().join("lda");
    let path = dir.join("model.json");
    if path.exists() {
        match jsonl::read_json::<LdaCache>(&path) {
            Ok(c) if c.config_hash == config_hash
                && c.lda == cfg.lda
                && c.model.doc_ids.iter().eq(train.iter().map(|t| &t.id)) =>
            {
                return Ok(c.model);
            }
            Ok(_) => log::info!("{} is stale; retraining", path.display()),
            Err(e) => log::warn!("ignoring unreadable LDA cache: {e}"),
        }
    }
    log::info!("training LDA with {} topics for {} iterations", cfg.lda.n_topics, cfg.lda.iterations);
    let model = lda_train(train, &cfg.lda)?;
    ensure_dir(&dir)?;
    let cache = LdaCache { config_hash: config_hash.into(), lda: cfg.lda, model };
    jsonl::write_json(&path, &cache)?;
    Ok(cache.model)
}

/// ALOC and MuC reports of the LDA baseline on `tweets`.
pub(super) fn lda_reports(model: &LdaModel, train: &[CleanTweet], tweets: &[CleanTweet]) -> AppResult<[EvalReport; 2]> {
    let rec = LdaRecommender::new(model, train)?;
    let truth = truth_of(tweets);
    let run = |metric| eval_metric(metric, &predict_with(tweets, metric, |t, k| rec.recommend(t, k)), &truth);
    Ok([run(Metric::Aloc)?, run(Metric::Muc)?])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub method: String,
    pub split: SplitPart,
    pub n: usize,
    pub unscorable: usize,
    pub aloc: f64,
    pub muc: f64,
}

/// Scores the LDA baseline on `part` and writes `reports/baseline-<part>.json`.
pub fn baseline(cfg: &RunConfig, part: SplitPart) -> AppResult<BaselineReport> {
    cfg.validate()?;
    let split = load_split_manifest(cfg)?;
    let train = load_part(cfg, &split, SplitPart::Train)?;
    let tweets = load_part(cfg, &split, part)?;
    let model = load_or_train_lda(cfg, &train, &split.config_hash)?;
    let [aloc, muc] = lda_reports(&model, &train, &tweets)?;
    let report = BaselineReport {
        method: "lda".into(),
        split: part,
        n: aloc.n_tweets,
        unscorable: aloc.n_unscorable,
        aloc: aloc.score,
        muc: muc.score,
    };
    let dir = reports_dir(cfg);
    ensure_dir(&dir)?;
    emit(Some(&dir.join(format!("baseline-{}.json", part_name(part)))), &pretty(&report))?;
    Ok(report)
}
