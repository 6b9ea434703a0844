use std::path::PathBuf;

use emtagger_core::corpus::SplitPart;
use emtagger_core::eval::{eval_metric, lift, per_tweet_csv, predict_all, truth_of, Metric};
use emtagger_core::{ModelKind, RankScope};
use serde::{Deserialize, Serialize};

use super::baseline::{lda_reports, load_or_train_lda};
use super::recommend::load_checked_bundle;
use super::{emit, ensure_dir, load_part, load_split_manifest, part_name, pretty, reports_dir, BaselineReport};
use crate::config::RunConfig;
use crate::error::AppResult;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub split: SplitPart,
    pub metric: Metric,
    /// Also score the LDA baseline and report lifts.
    pub baseline: bool,
    pub per_tweet: Option<PathBuf>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { split: SplitPart::Test, metric: Metric::Aloc, baseline: false, per_tweet: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub metric: Metric,
    pub label: String,
    pub score: f64,
    pub n: usize,
    pub unscorable: usize,
    pub split: SplitPart,
    pub model: ModelKind,
    pub rank_scope: RankScope,
    pub baseline: Option<BaselineReport>,
    /// Score over the baseline's score under the same metric.
    pub lift_vs_baseline: Option<f64>,
    pub lift_vs_aloc_baseline: Option<f64>,
    pub lift_vs_muc_baseline: Option<f64>,
}

pub fn metric_label(metric: Metric) -> &'static str {
    match metric {
        Metric::Aloc => "ALOC hit-rate (one hashtag per tweet)",
        Metric::Muc => "MuC micro-averaged hit-rate (|truth| hashtags per tweet)",
    }
}

fn safe_lift(score: f64, baseline: f64) -> Option<f64> {
    match lift(score, baseline) {
        Ok(l) => Some(l),
        Err(e) => {
            log::warn!("no lift: {e}");
            None
        }
    }
}

/// Scores the bundle on a split and writes `reports/evaluate-<metric>-<split>.json`.
pub fn evaluate(cfg: &RunConfig, opts: &EvalOptions) -> AppResult<EvalSummary> {
    cfg.validate()?;
    let split = load_split_manifest(cfg)?;
    let (model, manifest) = load_checked_bundle(cfg)?;
    let tweets = load_part(cfg, &split, opts.split)?;
    let predictions = predict_all(&model, &tweets, opts.metric, cfg.rank_scope);
    let report = eval_metric(opts.metric, &predictions, &truth_of(&tweets))?;
    if let Some(path) = &opts.per_tweet {
        emit(Some(path), &per_tweet_csv(&report))?;
    }

    let mut summary = EvalSummary {
        metric: opts.metric,
        label: metric_label(opts.metric).into(),
        score: report.score,
        n: report.n_tweets,
        unscorable: report.n_unscorable,
        split: opts.split,
        model: manifest.kind,
        rank_scope: cfg.rank_scope,
        baseline: None,
        lift_vs_baseline: None,
        lift_vs_aloc_baseline: None,
        lift_vs_muc_baseline: None,
    };
    if opts.baseline {
        let train = load_part(cfg, &split, SplitPart::Train)?;
        let lda = load_or_train_lda(cfg, &train, &split.config_hash)?;
        let [aloc, muc] = lda_reports(&lda, &train, &tweets)?;
        summary.lift_vs_aloc_baseline = safe_lift(report.score, aloc.score);
        summary.lift_vs_muc_baseline = safe_lift(report.score, muc.score);
        summary.lift_vs_baseline = match opts.metric {
            Metric::Aloc => summary.lift_vs_aloc_baseline,
            Metric::Muc => summary.lift_vs_muc_baseline,
        };
        summary.baseline = Some(BaselineReport {
            method: "lda".into(),
            split: opts.split,
            n: aloc.n_tweets,
            unscorable: aloc.n_unscorable,
            aloc: aloc.score,
            muc: muc.score,
        });
    }
    let dir = reports_dir(cfg);
    ensure_dir(&dir)?;
    let name = format!("evaluate-{}-{}.json", opts.metric.name().to_ascii_lowercase(), part_name(opts.split));
    emit(Some(&dir.join(name)), &pretty(&summary))?;
    Ok(summary)
}

/// Lift from externally supplied scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub metric: Metric,
    pub score: f64,
    pub baseline_score: f64,
    pub lift_vs_baseline: f64,
    /// Two-decimal rendering.
    pub lift_rounded: String,
}

pub fn lift_report(metric: Metric, score: f64, baseline_score: f64) -> AppResult<LiftReport> {
    let l = lift(score, baseline_score)?;
    Ok(LiftReport { metric, score, baseline_score, lift_vs_baseline: l, lift_rounded: format!("{l:.2}") })
}
