//! Byte formats for trained vectors.
//!
//! Embedding model (`.emb`), all integers little-endian:
//!
//! ```text
//! "EMTG" | version u16 | dim u32 | vocab size u64
//! per word: byte length u32 | UTF-8 bytes | count u64 | dim × f32
//! ```
//!
//! Hashtag vectors:
//!
//! ```text
//! "EMHV" | version u16 | dim u32 | entries u64
//! per entry: byte length u32 | UTF-8 tag | dim × f64
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{EmbeddingModel, TrainConfig, Vocabulary};
use crate::error::{Error, Result};

pub const MODEL_MAGIC: &[u8; 4] = b"EMTG";
pub const HASHTAG_MAGIC: &[u8; 4] = b"EMHV";
pub const FORMAT_VERSION: u16 = 1;

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

fn header(out: &mut Vec<u8>, magic: &[u8; 4], dim: usize, entries: usize) {
    out.extend_from_slice(magic);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(dim as u32).to_le_bytes());
    out.extend_from_slice(&(entries as u64).to_le_bytes());
}

pub fn encode_model(model: &EmbeddingModel) -> Vec<u8> {
    let dim = model.dim();
    let mut out = Vec::with_capacity(18 + model.vocabulary().len() * (16 + 4 * dim));
    header(&mut out, MODEL_MAGIC, dim, model.vocabulary().len());
    for (i, (word, count)) in model.vocabulary().iter().enumerate() {
        put_str(&mut out, word);
        out.extend_from_slice(&count.to_le_bytes());
        for x in model.row(i) {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

/// Parses an `.emb` payload. `config` supplies the training settings, which
/// the binary does not carry; its `dim` must match the stored one.
pub fn decode_model(bytes: &[u8], config: TrainConfig) -> Result<EmbeddingModel> {
    let mut r = Reader::new(bytes);
    let (dim, n) = r.header(MODEL_MAGIC)?;
    if dim != config.dim as usize {
        return Err(Error::Decode(format!("stored dimension {dim}, configuration says {}", config.dim)));
    }
    let mut entries = Vec::with_capacity(n.min(1 << 20));
    let mut vectors = Vec::with_capacity(n.saturating_mul(dim).min(1 << 24));
    for _ in 0..n {
        let word = r.string()?;
        let count = r.u64()?;
        entries.push((word, count));
        for _ in 0..dim {
            vectors.push(f32::from_le_bytes(r.array()?));
        }
    }
    r.finish()?;
    EmbeddingModel::from_parts(Vocabulary::from_entries(entries)?, vectors, config)
}

pub fn encode_hashtag_vectors<'a, I>(dim: usize, vectors: I) -> Vec<u8>
where
    I: IntoIterator<Item = (&'a str, &'a [f64])>,
{
    let items: Vec<_> = vectors.into_iter().collect();
    let mut out = Vec::new();
    header(&mut out, HASHTAG_MAGIC, dim, items.len());
    for (tag, v) in items {
        debug_assert_eq!(v.len(), dim);
        put_str(&mut out, tag);
        for x in v {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

pub fn decode_hashtag_vectors(bytes: &[u8]) -> Result<(usize, BTreeMap<String, Vec<f64>>)> {
    let mut r = Reader::new(bytes);
    let (dim, n) = r.header(HASHTAG_MAGIC)?;
    let mut out = BTreeMap::new();
    for _ in 0..n {
        let tag = r.string()?;
        let v = (0..dim).map(|_| r.array().map(f64::from_le_bytes)).collect::<Result<Vec<_>>>()?;
        if out.insert(tag, v).is_some() {
            return Err(Error::Decode("duplicate hashtag entry".into()));
        }
    }
    r.finish()?;
    Ok((dim, out))
}

/// Plain-text export: a `vocab_size dim` header, then one
/// `word x1 x2 ...` line per word.
pub fn export_text(model: &EmbeddingModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", model.vocabulary().len(), model.dim());
    for (i, word) in model.vocabulary().words().iter().enumerate() {
        out.push_str(word);
        for x in model.row(i) {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Decode("unexpected end of data".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("take returns N bytes"))
    }

    fn u64(&mut self) -> Result<u64> {
        self.array().map(u64::from_le_bytes)
    }

    fn string(&mut self) -> Result<String> {
        let len = u32::from_le_bytes(self.array()?) as usize;
        core::str::from_utf8(self.take(len)?)
            .map(ToString::to_string)
            .map_err(|_| Error::Decode("invalid UTF-8 in word".into()))
    }

    fn header(&mut self, magic: &[u8; 4]) -> Result<(usize, usize)> {
        if self.take(4)? != magic {
            return Err(Error::Decode("bad magic".into()));
        }
        let version = u16::from_le_bytes(self.array()?);
        if version != FORMAT_VERSION {
            return Err(Error::Decode(format!("unsupported format version {version}")));
        }
        let dim = u32::from_le_bytes(self.array()?) as usize;
        let n = usize::try_from(self.u64()?).map_err(|_| Error::Decode("entry count overflow".into()))?;
        Ok((dim, n))
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Decode("trailing bytes".into()));
        }
        Ok(())
    }
}
