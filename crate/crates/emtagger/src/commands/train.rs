use emtagger_core::corpus::SplitPart;
use emtagger_core::models::{self, ModelKind};
use emtagger_core::{Error, TrainedModel};

use super::{load_part, load_split_manifest};
use crate::bundle::{self, Manifest};
use crate::config::RunConfig;
use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainOptions {
    pub workers: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self { workers: 1 }
    }
}

/// Trains `cfg.model` on the train split and writes the bundle.
pub fn train(cfg: &RunConfig, opts: TrainOptions) -> AppResult<Manifest> {
    cfg.validate()?;
    let split = load_split_manifest(cfg)?;
    let tweets = load_part(cfg, &split, SplitPart::Train)?;
    let min_count = cfg.train.min_count;
    let result = match (cfg.model, opts.workers) {
        (ModelKind::Model1, w) => models::train_model1_with_workers(&tweets, &cfg.train, w).map(TrainedModel::One),
        (ModelKind::Model2, w) => {
            if w > 1 {
                log::warn!(
                    "WARNING: --workers {w} trains with unsynchronized updates; the model will NOT be reproducible"
                );
            }
            models::train_model2_with_workers(&tweets, &cfg.train, w).map(TrainedModel::Two)
        }
    };
    let model = result.map_err(|e| match e {
        Error::NoTrainableHashtag => AppError::data(format!(
            "no hashtag document has a word seen at least {min_count} times; every hashtag is untrainable"
        )),
        Error::UntrainableDocument { .. } => AppError::data(format!(
            "the global document has no word seen at least {min_count} times"
        )),
        other => other.into(),
    })?;
    for (tag, vector) in model.hashtag_vectors() {
        if vector.is_none() {
            log::warn!("hashtag {tag} has no vector and will not be scored");
        }
    }
    bundle::save(&cfg.bundle_dir(), &model, &split.config_hash)
}
