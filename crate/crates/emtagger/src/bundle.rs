//! On-disk model bundles.
//!
//! ```text
//! <dir>/manifest.json          kind, config, hashtags, checksums
//! <dir>/global.emb             Model 2 only
//! <dir>/per_hashtag/<tag>.emb  Model 1 only, one per trainable hashtag
//! <dir>/hashtag_vectors.bin
//! <dir>/cooccurrence.json
//! <dir>/tweet_hashtags.json
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use emtagger_core::models::HashtagSpace;
use emtagger_core::skipgram::codec;
use emtagger_core::{HashtagGraph, Model1, Model2, ModelKind, TrainConfig, TrainedModel};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{AppError, AppResult};

pub const MANIFEST: &str = "manifest.json";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    pub kind: ModelKind,
    pub config: TrainConfig,
    /// Hash of the preprocessing config that produced the training split.
    pub config_hash: String,
    pub hashtags: Vec<String>,
    /// Hashtags with no vector.
    pub absent: Vec<String>,
    /// Relative path to SHA-256 hex digest, for every other file.
    pub files: BTreeMap<String, String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("bundle value serializes");
    v.push(b'\n');
    v
}

fn emb_path(tag: &str) -> String {
    format!("per_hashtag/{tag}.emb")
}

/// A hashtag is used as a file name, so it must be a plain token.
fn check_tag(tag: &str) -> AppResult<()> {
    let ok = !tag.is_empty() && tag.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
    if ok {
        Ok(())
    } else {
        Err(AppError::data(format!("hashtag {tag:?} cannot name a bundle file")))
    }
}

/// Serialized files of a model, keyed by bundle-relative path.
pub fn encode(model: &TrainedModel, config_hash: &str) -> AppResult<BTreeMap<String, Vec<u8>>> {
    let mut files = BTreeMap::new();
    let vectors = model.hashtag_vectors();
    let dim = model.config().dim as usize;
    match model {
        TrainedModel::One(m) => {
            for (tag, space) in &m.spaces {
                check_tag(tag)?;
                if let Some(space) = space {
                    files.insert(emb_path(tag), codec::encode_model(&space.model));
                }
            }
        }
        TrainedModel::Two(m) => {
            files.insert("global.emb".into(), codec::encode_model(&m.global));
        }
    }
    let present = vectors.iter().filter_map(|(t, v)| v.map(|v| (*t, v)));
    files.insert("hashtag_vectors.bin".into(), codec::encode_hashtag_vectors(dim, present));
    files.insert("cooccurrence.json".into(), to_json(model.graph().cooccurrence()));
    files.insert("tweet_hashtags.json".into(), to_json(model.graph().tweet_hashtags()));

    let manifest = Manifest {
        format_version: BUNDLE_VERSION,
        kind: model.kind(),
        config: *model.config(),
        config_hash: config_hash.into(),
        hashtags: vectors.keys().map(|t| t.to_string()).collect(),
        absent: vectors.iter().filter(|(_, v)| v.is_none()).map(|(t, _)| t.to_string()).collect(),
        files: files.iter().map(|(p, b)| (p.clone(), sha256_hex(b))).collect(),
    };
    files.insert(MANIFEST.into(), to_json(&manifest));
    Ok(files)
}

/// Writes a bundle, replacing any previous bundle in `dir`.
pub fn save(dir: &Path, model: &TrainedModel, config_hash: &str) -> AppResult<Manifest> {
    let files = encode(model, config_hash)?;
    if dir.exists() {
        let is_bundle = dir.join(MANIFEST).exists();
        let is_empty = fs::read_dir(dir).map_err(|e| AppError::io(dir, e))?.next().is_none();
        if !is_bundle && !is_empty {
            return Err(AppError::data(format!("{} exists and is not a model bundle", dir.display())));
        }
        fs::remove_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    for (rel, bytes) in &files {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| AppError::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| AppError::io(&path, e))?;
    }
    read_manifest(dir)
}

pub fn read_manifest(dir: &Path) -> AppResult<Manifest> {
    let path = dir.join(MANIFEST);
    let bytes = fs::read(&path).map_err(|e| AppError::io(&path, e))?;
    let m: Manifest =
        serde_json::from_slice(&bytes).map_err(|e| AppError::data(format!("{}: {e}", path.display())))?;
    if m.format_version != BUNDLE_VERSION {
        return Err(AppError::data(format!("{}: unsupported bundle version {}", path.display(), m.format_version)));
    }
    Ok(m)
}

struct Reader<'a> {
    dir: &'a Path,
    manifest: &'a Manifest,
}

impl Reader<'_> {
    fn path(&self, rel: &str) -> PathBuf {
        self.dir.join(rel)
    }

    /// Reads a listed file and checks its digest.
    fn read(&self, rel: &str) -> AppResult<Vec<u8>> {
        let expected = self
            .manifest
            .files
            .get(rel)
            .ok_or_else(|| AppError::data(format!("bundle manifest does not list {rel}")))?;
        let path = self.path(rel);
        let bytes = fs::read(&path).map_err(|e| AppError::io(&path, e))?;
        if &sha256_hex(&bytes) != expected {
            return Err(AppError::data(format!("{}: checksum mismatch", path.display())));
        }
        Ok(bytes)
    }

    fn json<T: for<'de> Deserialize<'de>>(&self, rel: &str) -> AppResult<T> {
        let bytes = self.read(rel)?;
        serde_json::from_slice(&bytes).map_err(|e| AppError::data(format!("{}: {e}", self.path(rel).display())))
    }

    fn decode<T>(&self, rel: &str, f: impl FnOnce(&[u8]) -> emtagger_core::Result<T>) -> AppResult<T> {
        let bytes = self.read(rel)?;
        f(&bytes).map_err(|e| AppError::data(format!("{}: {e}", self.path(rel).display())))
    }
}

/// Loads and verifies a bundle.
pub fn load(dir: &Path) -> AppResult<(TrainedModel, Manifest)> {
    let manifest = read_manifest(dir)?;
    let r = Reader { dir, manifest: &manifest };
    let cooccurrence: BTreeMap<String, BTreeSet<String>> = r.json("cooccurrence.json")?;
    let tweet_hashtags: BTreeMap<String, BTreeSet<String>> = r.json("tweet_hashtags.json")?;
    let graph = HashtagGraph::from_parts(cooccurrence, tweet_hashtags);
    let (dim, mut vectors) = r.decode("hashtag_vectors.bin", codec::decode_hashtag_vectors)?;
    if dim != manifest.config.dim as usize {
        return Err(AppError::data(format!("hashtag vectors have dimension {dim}, manifest says {}", manifest.config.dim)));
    }
    let absent: BTreeSet<&String> = manifest.absent.iter().collect();
    let listed: BTreeSet<&String> = manifest.hashtags.iter().collect();
    let stored: BTreeSet<&String> = vectors.keys().collect();
    let expected: BTreeSet<&String> = listed.difference(&absent).copied().collect();
    if stored != expected {
        return Err(AppError::data("hashtag vectors disagree with the manifest hashtag list"));
    }

    let model = match manifest.kind {
        ModelKind::Model1 => {
            let mut spaces = BTreeMap::new();
            for tag in &manifest.hashtags {
                check_tag(tag)?;
                let space = match vectors.remove(tag) {
                    None => None,
                    Some(vector) => {
                        let model = r.decode(&emb_path(tag), |b| codec::decode_model(b, manifest.config))?;
                        Some(HashtagSpace { model, vector })
                    }
                };
                spaces.insert(tag.clone(), space);
            }
            TrainedModel::One(Model1 { spaces, graph, config: manifest.config })
        }
        ModelKind::Model2 => {
            let global = r.decode("global.emb", |b| codec::decode_model(b, manifest.config))?;
            let hashtag_vectors = manifest.hashtags.iter().map(|t| (t.clone(), vectors.remove(t))).collect();
            TrainedModel::Two(Model2 { global, hashtag_vectors, graph })
        }
    };
    Ok((model, manifest))
}
