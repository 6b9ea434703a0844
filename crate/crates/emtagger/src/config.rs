//! Run configuration, loaded from TOML or JSON.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use emtagger_core::corpus::{default_slang, default_stopwords, parse_slang, parse_stopwords};
use emtagger_core::{LdaConfig, ModelKind, PipelineConfig, RankScope, SplitRatios, TrainConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{AppError, AppResult};

/// Preprocessing settings as written in a config file. Dictionaries are
/// file paths; the built-in lists apply when they are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineSection {
    pub min_hashtag_freq: u32,
    pub max_hashtag_freq: u32,
    pub split_ratios: SplitRatios,
    pub seed: u64,
    pub stopwords: Option<PathBuf>,
    pub slang: Option<PathBuf>,
}

impl Default for PipelineSection {
    fn default() -> Self {
        let p = PipelineConfig::default();
        Self {
            min_hashtag_freq: p.min_hashtag_freq,
            max_hashtag_freq: p.max_hashtag_freq,
            split_ratios: p.split_ratios,
            seed: p.seed,
            stopwords: None,
            slang: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    /// Raw JSON Lines corpus.
    pub input: Option<PathBuf>,
    pub workdir: Option<PathBuf>,
    /// Model bundle directory; defaults to `<workdir>/model`.
    pub bundle: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pipeline: PipelineSection,
    pub train: TrainConfig,
    pub lda: LdaConfig,
    pub model: ModelKind,
    /// Recommendations per tweet for `recommend`.
    pub k: usize,
    pub rank_scope: RankScope,
    /// Vector sizes tried by `sweep`.
    pub sweep_dims: Vec<u32>,
    pub paths: Paths,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineSection::default(),
            train: TrainConfig::default(),
            lda: LdaConfig::default(),
            model: ModelKind::Model2,
            k: 5,
            rank_scope: RankScope::Expansion,
            sweep_dims: vec![25, 50, 100, 200, 400, 600],
            paths: Paths::default(),
        }
    }
}

impl RunConfig {
    /// Parses by extension: `.json` as JSON, anything else as TOML.
    /// Relative paths inside the file resolve against the file's folder.
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let mut cfg: Self = if is_json {
            serde_json::from_str(&text).map_err(|e| AppError::usage(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| AppError::usage(format!("{}: {e}", path.display())))?
        };
        let base = path.parent().unwrap_or(Path::new("."));
        let paths = [
            &mut cfg.pipeline.stopwords,
            &mut cfg.pipeline.slang,
            &mut cfg.paths.input,
            &mut cfg.paths.workdir,
            &mut cfg.paths.bundle,
        ];
        for p in paths.into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Replaces every seed with `seed`.
    pub fn override_seed(&mut self, seed: u64) {
        self.pipeline.seed = seed;
        self.train.seed = seed;
        self.lda.seed = seed;
    }

    pub fn workdir(&self) -> PathBuf {
        self.paths.workdir.clone().unwrap_or_else(|| PathBuf::from("emtagger-work"))
    }

    pub fn bundle_dir(&self) -> PathBuf {
        self.paths.bundle.clone().unwrap_or_else(|| self.workdir().join("model"))
    }

    pub fn corpus_dir(&self) -> PathBuf {
        self.workdir().join("corpus")
    }

    /// Core preprocessing config with dictionaries loaded.
    pub fn pipeline_config(&self) -> AppResult<PipelineConfig> {
        let p = &self.pipeline;
        let stopwords: BTreeSet<String> = match &p.stopwords {
            Some(path) => parse_stopwords(&read_text(path)?),
            None => default_stopwords(),
        };
        let slang: BTreeMap<String, String> = match &p.slang {
            Some(path) => {
                parse_slang(&read_text(path)?).map_err(|e| AppError::usage(format!("{}: {e}", path.display())))?
            }
            None => default_slang(),
        };
        let cfg = PipelineConfig {
            min_hashtag_freq: p.min_hashtag_freq,
            max_hashtag_freq: p.max_hashtag_freq,
            stopwords,
            slang,
            split_ratios: p.split_ratios,
            seed: p.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> AppResult<()> {
        self.train.validate()?;
        self.lda.validate()?;
        if self.k == 0 {
            return Err(AppError::usage("k must be positive"));
        }
        Ok(())
    }
}

fn read_text(path: &Path) -> AppResult<String> {
    std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))
}

/// SHA-256 of the canonical JSON form of a preprocessing config. Sets and
/// maps serialize in sorted order, so equal configs hash equally.
pub fn config_hash(cfg: &PipelineConfig) -> String {
    let json = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(json))
}
