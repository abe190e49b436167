//! Content-addressed on-disk cache for power norms. Keys hash the
//! alphabet weights and the reduced word; entries are JSON files written
//! atomically (temp file plus rename), so concurrent writers are safe.
//! Any cache failure degrades to recomputation, never to a wrong answer.

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alphabet::WeightedAlphabet;
use crate::error::Result;
use crate::parse::parse_rational;
use crate::word::Word;

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    /// Exact norm as a `p/q` string.
    pub value: String,
    pub created: u64,
    pub version: String,
}

#[derive(Debug, Clone)]
pub struct NormCache {
    dir: Option<PathBuf>,
}

/// Hash of (alphabet weights, reduced word); the cache key.
pub fn norm_key(alphabet: &WeightedAlphabet, w: &Word) -> String {
    let reduced = w.reduce();
    let mut hasher = Sha256::new();
    hasher.update(alphabet.cache_repr().as_bytes());
    hasher.update(b"|");
    for l in &reduced.letters {
        hasher.update(l.generator.to_le_bytes());
        hasher.update([l.inverse as u8]);
    }
    format!("{:x}", hasher.finalize())
}

impl NormCache {
    /// Cache under $CONECALC_CACHE, falling back to a per-user cache
    /// directory.
    pub fn from_env() -> Self {
        let dir = std::env::var_os("CONECALC_CACHE")
            .map(PathBuf::from)
            .or_else(|| {
                std::env::var_os("HOME")
                    .map(|h| PathBuf::from(h).join(".cache").join("conecalc"))
            })
            .unwrap_or_else(|| std::env::temp_dir().join("conecalc-cache"));
        NormCache { dir: Some(dir) }
    }

    pub fn at(dir: PathBuf) -> Self {
        NormCache { dir: Some(dir) }
    }

    pub fn disabled() -> Self {
        NormCache { dir: None }
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    fn read(&self, key: &str) -> Option<Rational64> {
        let path = self.path_for(key)?;
        let bytes = fs::read(&path).ok()?;
        let entry: CacheEntry = serde_json::from_slice(&bytes).ok()?;
        parse_rational(&entry.value).ok()
    }

    fn write(&self, key: &str, value: Rational64) {
        let Some(path) = self.path_for(key) else { return };
        let Some(dir) = path.parent() else { return };
        if fs::create_dir_all(dir).is_err() {
            eprintln!("warning: cannot create cache directory {}", dir.display());
            return;
        }
        let entry = CacheEntry {
            value: format!("{}/{}", value.numer(), value.denom()),
            created: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let nonce = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.subsec_nanos())
            .unwrap_or(0);
        let tmp = dir.join(format!(".{key}.{}.{nonce}.tmp", std::process::id()));
        let payload = match serde_json::to_vec(&entry) {
            Ok(p) => p,
            Err(_) => return,
        };
        if fs::write(&tmp, payload).is_err() {
            eprintln!("warning: cache write failed, continuing without cache");
            let _ = fs::remove_file(&tmp);
            return;
        }
        if fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    /// Return the cached value for `key`, or compute, persist and return.
    /// The boolean reports a cache hit.
    pub fn get_or_compute(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<Rational64>,
    ) -> Result<(Rational64, bool)> {
        if let Some(v) = self.read(key) {
            return Ok((v, true));
        }
        let v = compute()?;
        self.write(key, v);
        Ok((v, false))
    }
}
