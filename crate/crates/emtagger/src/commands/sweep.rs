use emtagger_core::corpus::SplitPart;
use emtagger_core::eval::{eval_metric, predict_all, truth_of, Metric};
use emtagger_core::models::{train_model1, train_model2};
use emtagger_core::{CleanTweet, ModelKind, TrainedModel};

use super::{load_part, load_split_manifest};
use crate::config::RunConfig;
use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub dim: u32,
    pub metric: Metric,
    /// `None` when training or scoring failed at this size.
    pub score: Option<f64>,
}

fn score_at(cfg: &RunConfig, dim: u32, train: &[CleanTweet], tweets: &[CleanTweet], metric: Metric) -> AppResult<f64> {
    let tc = emtagger_core::TrainConfig { dim, ..cfg.train };
    tc.validate()?;
    let model = match cfg.model {
        ModelKind::Model1 => TrainedModel::One(train_model1(train, &tc)?),
        ModelKind::Model2 => TrainedModel::Two(train_model2(train, &tc)?),
    };
    let preds = predict_all(&model, tweets, metric, cfg.rank_scope);
    Ok(eval_metric(metric, &preds, &truth_of(tweets))?.score)
}

/// Trains at each vector size and scores on the validation split.
/// Returns rows sorted by size, then metric, and the CSV text.
pub fn sweep(cfg: &RunConfig, dims: &[u32], metrics: &[Metric]) -> AppResult<(Vec<SweepRow>, String)> {
    if dims.is_empty() {
        return Err(AppError::usage("sweep needs at least one vector size"));
    }
    if metrics.is_empty() {
        return Err(AppError::usage("sweep needs at least one metric"));
    }
    let split = load_split_manifest(cfg)?;
    let train = load_part(cfg, &split, SplitPart::Train)?;
    let validation = load_part(cfg, &split, SplitPart::Validation)?;
    let mut dims = dims.to_vec();
    dims.sort_unstable();
    dims.dedup();
    let mut metrics = metrics.to_vec();
    metrics.sort_by_key(|m| m.name());
    metrics.dedup();

    let mut rows = Vec::new();
    let mut csv = String::from("l,metric,score\n");
    for &dim in &dims {
        for &metric in &metrics {
            let score = match score_at(cfg, dim, &train, &validation, metric) {
                Ok(s) => Some(s),
                Err(e) => {
                    log::error!("sweep at L={dim} ({}) failed: {e}", metric.name());
                    None
                }
            };
            let cell = score.map(|s| s.to_string()).unwrap_or_default();
            csv.push_str(&format!("{dim},{},{cell}\n", metric.name()));
            rows.push(SweepRow { dim, metric, score });
        }
    }
    Ok((rows, csv))
}
