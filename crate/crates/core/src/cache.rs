//! Append-only JSON-lines persistence for exact results.
//!
//! The directory comes from `KRON_CACHE_DIR` (default `.kron-cache/`); an empty
//! value disables persistence. Unreadable lines are skipped with a warning and
//! an unwritable directory degrades to an in-memory cache.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub const CACHE_ENV: &str = "KRON_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".kron-cache";

/// Cache directory selected by the environment, `None` when disabled.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    match std::env::var(CACHE_ENV) {
        Ok(v) if v.is_empty() => None,
        Ok(v) => Some(PathBuf::from(v)),
        Err(_) => Some(PathBuf::from(DEFAULT_CACHE_DIR)),
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

impl CacheStats {
    pub fn hit_ratio(&self) -> f64 {
        let total = self.hits + self.misses;
        if total == 0 {
            0.0
        } else {
            self.hits as f64 / total as f64
        }
    }
}

/// A keyed JSON-lines file. Records of type `R` are indexed by `key_of`.
pub struct JsonlStore<R> {
    path: Option<PathBuf>,
    entries: Mutex<HashMap<String, R>>,
    stats: Mutex<CacheStats>,
    key_of: fn(&R) -> String,
}

impl<R: Serialize + DeserializeOwned + Clone> JsonlStore<R> {
    /// Opens `dir/file`, loading existing records. `dir = None` gives a
    /// memory-only store.
    pub fn open(dir: Option<&Path>, file: &str, key_of: fn(&R) -> String) -> Self {
        let mut entries = HashMap::new();
        let mut path = None;
        if let Some(dir) = dir {
            match fs::create_dir_all(dir) {
                Ok(()) => {
                    let p = dir.join(file);
                    if let Ok(f) = File::open(&p) {
                        for (lineno, line) in BufReader::new(f).lines().enumerate() {
                            let Ok(line) = line else {
                                log::warn!("{}: unreadable line {}", p.display(), lineno + 1);
                                continue;
                            };
                            if line.trim().is_empty() {
                                continue;
                            }
                            match serde_json::from_str::<R>(&line) {
                                Ok(r) => {
                                    entries.insert(key_of(&r), r);
                                }
                                Err(e) => log::warn!("{}: skipping corrupted line {}: {e}", p.display(), lineno + 1),
                            }
                        }
                    }
                    path = Some(p);
                }
                Err(e) => log::warn!("cache directory {} unusable ({e}); continuing without cache", dir.display()),
            }
        }
        JsonlStore { path, entries: Mutex::new(entries), stats: Mutex::new(CacheStats::default()), key_of }
    }

    pub fn memory(key_of: fn(&R) -> String) -> Self {
        Self::open(None, "", key_of)
    }

    pub fn is_persistent(&self) -> bool {
        self.path.is_some()
    }

    pub fn get(&self, key: &str) -> Option<R> {
        let found = self.entries.lock().unwrap().get(key).cloned();
        let mut stats = self.stats.lock().unwrap();
        if found.is_some() {
            stats.hits += 1;
        } else {
            stats.misses += 1;
        }
        found
    }

    pub fn put(&self, record: R) {
        let key = (self.key_of)(&record);
        if let Some(path) = &self.path {
            let line = serde_json::to_string(&record).expect("cache records serialize");
            let written = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .and_then(|mut f| writeln!(f, "{line}"));
            if let Err(e) = written {
                log::warn!("cannot append to {}: {e}", path.display());
            }
        }
        self.entries.lock().unwrap().insert(key, record);
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stats(&self) -> CacheStats {
        *self.stats.lock().unwrap()
    }
}

/// A cached Kronecker coefficient, keyed by [`coefficient_key`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct CoefficientRecord {
    pub key: String,
    pub value: String,
}

pub type CoefficientCache = JsonlStore<CoefficientRecord>;

pub const COEFFICIENT_FILE: &str = "coefficients.jsonl";

/// Canonical key `d=..;k=..;<entries>` with the tuple entries sorted, since
/// the coefficient does not depend on their order.
pub fn coefficient_key(d: usize, k: usize, t: &crate::partition::PartitionTuple) -> String {
    let mut entries: Vec<String> = t.entries().iter().map(|p| p.to_string()).collect();
    entries.sort();
    format!("d={d};k={k};{}", entries.join(";"))
}

pub fn open_coefficient_cache(dir: Option<&Path>) -> CoefficientCache {
    JsonlStore::open(dir, COEFFICIENT_FILE, |r: &CoefficientRecord| r.key.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    struct Rec {
        key: String,
        value: String,
    }

    fn key(r: &Rec) -> String {
        r.key.clone()
    }

    #[test]
    fn put_then_get_survives_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let store = JsonlStore::open(Some(dir.path()), "t.jsonl", key);
        assert!(store.get("a").is_none());
        store.put(Rec { key: "a".into(), value: "12345678901234567890123".into() });
        assert_eq!(store.get("a").unwrap().value, "12345678901234567890123");
        let again = JsonlStore::open(Some(dir.path()), "t.jsonl", key);
        assert_eq!(again.get("a").unwrap().value, "12345678901234567890123");
        assert_eq!(again.stats(), CacheStats { hits: 1, misses: 0 });
    }

    #[test]
    fn corrupted_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("t.jsonl"),
            "{\"key\":\"a\",\"value\":\"1\"}\nnot json\n{\"key\":\"b\",\"value\":\"2\"}\n",
        )
        .unwrap();
        let store = JsonlStore::open(Some(dir.path()), "t.jsonl", key);
        assert_eq!(store.len(), 2);
    }

    #[test]
    fn coefficient_keys_ignore_entry_order() {
        let a: crate::partition::PartitionTuple = "4,2;2,2,2;3,2,1".parse().unwrap();
        let b: crate::partition::PartitionTuple = "3,2,1;4,2;2,2,2".parse().unwrap();
        assert_eq!(coefficient_key(3, 4, &a), coefficient_key(3, 4, &b));
        assert_ne!(coefficient_key(3, 4, &a), coefficient_key(3, 3, &a));
    }

    #[test]
    fn memory_store_misses() {
        let store: JsonlStore<Rec> = JsonlStore::memory(key);
        assert!(!store.is_persistent());
        assert!(store.get("x").is_none());
        assert_eq!(store.stats().misses, 1);
    }
}
