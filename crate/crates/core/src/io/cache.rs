//! Binary persistence of word tables.
//!
//! Layout (little endian): magic `SZWT`, `u32` format version, `u16`-prefixed
//! code version string, `u64` group hash, `u32` rank, `u32` maximum length,
//! then per length a `u64` word count followed by the letters, traces,
//! lengths and fixed points of that block. A SHA-256 digest of everything
//! before it closes the file.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::schottky::SchottkyGroup;
use crate::symbolic::{LengthBlock, WordTable, DEFAULT_ENTRY_CAP};

pub const CACHE_MAGIC: &[u8; 4] = b"SZWT";
pub const CACHE_FORMAT_VERSION: u32 = 1;
/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "SCHOTTKY_CACHE_DIR";

pub fn code_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

pub fn encode_table(table: &WordTable) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + table.total() * (table.max_length() + 24));
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_FORMAT_VERSION.to_le_bytes());
    let cv = code_version().as_bytes();
    out.extend_from_slice(&(cv.len() as u16).to_le_bytes());
    out.extend_from_slice(cv);
    out.extend_from_slice(&table.group_hash.to_le_bytes());
    out.extend_from_slice(&(table.rank as u32).to_le_bytes());
    out.extend_from_slice(&(table.max_length() as u32).to_le_bytes());
    for b in &table.blocks {
        out.extend_from_slice(&(b.len() as u64).to_le_bytes());
        out.extend_from_slice(&b.letters);
        for col in [&b.traces, &b.lengths, &b.fixed_points] {
            for v in col.iter() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let s = self.buf.get(self.pos..end)?;
        self.pos = end;
        Some(s)
    }

    fn u16(&mut self) -> Option<u16> {
        self.take(2).map(|b| u16::from_le_bytes(b.try_into().unwrap()))
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize) -> Option<Vec<f64>> {
        let raw = self.take(n.checked_mul(8)?)?;
        Some(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

/// Decodes a table, checking integrity, versions and (optionally) the group.
pub fn decode_table(bytes: &[u8], path: &Path, expected_hash: Option<u64>) -> Result<WordTable> {
    let corrupt = |reason: &str| Error::CorruptCache { path: path.to_path_buf(), reason: reason.to_string() };
    let stale = |reason: String| Error::StaleCache { path: path.to_path_buf(), reason };
    if bytes.len() < 32 + 4 {
        return Err(corrupt("file too short"));
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(corrupt("checksum mismatch"));
    }
    let mut r = Reader { buf: body, pos: 0 };
    if r.take(4) != Some(CACHE_MAGIC.as_slice()) {
        return Err(corrupt("not a word-table cache"));
    }
    let version = r.u32().ok_or_else(|| corrupt("truncated header"))?;
    if version != CACHE_FORMAT_VERSION {
        return Err(stale(format!("format version {version}, expected {CACHE_FORMAT_VERSION}")));
    }
    let cv_len = r.u16().ok_or_else(|| corrupt("truncated header"))? as usize;
    let cv = r.take(cv_len).ok_or_else(|| corrupt("truncated header"))?;
    if cv != code_version().as_bytes() {
        return Err(stale(format!("written by version {}, this is {}", String::from_utf8_lossy(cv), code_version())));
    }
    let hash = r.u64().ok_or_else(|| corrupt("truncated header"))?;
    if let Some(h) = expected_hash {
        if h != hash {
            return Err(stale(format!("group hash {hash:016x}, expected {h:016x}")));
        }
    }
    let rank = r.u32().ok_or_else(|| corrupt("truncated header"))? as usize;
    let max_len = r.u32().ok_or_else(|| corrupt("truncated header"))? as usize;
    let mut blocks = Vec::with_capacity(max_len);
    for n in 1..=max_len {
        let count = r.u64().ok_or_else(|| corrupt("truncated block"))? as usize;
        let letters = r.take(count.checked_mul(n).ok_or_else(|| corrupt("bad count"))?).ok_or_else(|| corrupt("truncated block"))?;
        let traces = r.f64s(count).ok_or_else(|| corrupt("truncated block"))?;
        let lengths = r.f64s(count).ok_or_else(|| corrupt("truncated block"))?;
        let fixed_points = r.f64s(count).ok_or_else(|| corrupt("truncated block"))?;
        blocks.push(LengthBlock { n, letters: letters.to_vec(), traces, lengths, fixed_points });
    }
    if r.pos != body.len() {
        return Err(corrupt("trailing bytes"));
    }
    Ok(WordTable { group_hash: hash, rank, blocks })
}

pub fn save_table(table: &WordTable, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode_table(table)).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn load_table(path: &Path, expected_hash: Option<u64>) -> Result<WordTable> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_table(&bytes, path, expected_hash)
}

/// Save followed by load.
pub fn cache_roundtrip(table: &WordTable, path: &Path) -> Result<WordTable> {
    save_table(table, path)?;
    load_table(path, Some(table.group_hash))
}

/// Cache file for a group inside `dir`.
pub fn cache_path(dir: &Path, g: &SchottkyGroup<f64>) -> PathBuf {
    dir.join(format!("{}.szwt", g.hash_hex()))
}

/// Default cache directory from the environment, if set.
pub fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Word table of length `n`, read from the cache when possible. Stale or
/// corrupt caches are regenerated; the returned notes say what happened.
pub fn load_or_build(g: &SchottkyGroup<f64>, n: usize, dir: Option<&Path>) -> Result<(WordTable, Vec<String>)> {
    let mut notes = Vec::new();
    let Some(dir) = dir else {
        return Ok((crate::symbolic::enumerate_periodic_words(g, n)?, notes));
    };
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = cache_path(dir, g);
    let mut table = if path.exists() {
        match load_table(&path, Some(g.hash())) {
            Ok(t) => Some(t),
            Err(e @ (Error::StaleCache { .. } | Error::CorruptCache { .. })) => {
                notes.push(format!("{e}; regenerated"));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    match table.as_mut() {
        Some(t) if t.max_length() >= n => return Ok((t.truncated(n), notes)),
        Some(t) => {
            notes.push(format!("cache extended from length {} to {n}", t.max_length()));
            t.extend_to(g, n, DEFAULT_ENTRY_CAP)?;
        }
        None => table = Some(crate::symbolic::enumerate_periodic_words(g, n)?),
    }
    let table = table.expect("table built");
    save_table(&table, &path)?;
    Ok((table, notes))
}
