//! Append-only JSON-lines store of raw model answers.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::prompt::PromptBundle;
use crate::conllu::LangPair;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub pair: LangPair,
    pub model: String,
    pub response_text: String,
    /// Seconds since the Unix epoch when the answer was received.
    pub timestamp: u64,
}

impl CacheEntry {
    pub fn new(key: String, pair: LangPair, model: &str, response_text: String) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CacheEntry {
            key,
            pair,
            model: model.to_string(),
            response_text,
            timestamp,
        }
    }
}

/// SHA-256 over pair, model and both prompt texts, hex encoded.
pub fn cache_key(pair: LangPair, model: &str, prompt: &PromptBundle) -> String {
    let mut h = Sha256::new();
    for part in [pair.as_str(), model, &prompt.system, &prompt.user] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Thread-safe response cache. Lookups are shared; writes append one line to
/// the backing file under a lock.
#[derive(Debug, Default)]
pub struct ResponseCache {
    path: Option<PathBuf>,
    entries: RwLock<HashMap<String, CacheEntry>>,
    file: Mutex<Option<File>>,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {source}")]
    Entry {
        path: String,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

impl ResponseCache {
    pub fn in_memory() -> Self {
        ResponseCache::default()
    }

    /// Opens (or creates) a cache file and loads its entries. Later lines win
    /// over earlier ones with the same key.
    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let io = |source| CacheError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path).map_err(io)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: CacheEntry = serde_json::from_str(&line).map_err(|source| CacheError::Entry {
                    path: path.display().to_string(),
                    line: idx + 1,
                    source,
                })?;
                entries.insert(entry.key.clone(), entry);
            }
        }
        Ok(ResponseCache {
            path: Some(path.to_path_buf()),
            entries: RwLock::new(entries),
            file: Mutex::new(None),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cached answer for `key`, only if it was stored for the same pair.
    pub fn get(&self, pair: LangPair, key: &str) -> Option<String> {
        self.entries
            .read()
            .expect("cache lock")
            .get(key)
            .filter(|e| e.pair == pair)
            .map(|e| e.response_text.clone())
    }

    pub fn put(&self, entry: CacheEntry) -> Result<(), CacheError> {
        if let Some(path) = &self.path {
            let io = |source| CacheError::Io {
                path: path.display().to_string(),
                source,
            };
            let mut guard = self.file.lock().expect("cache file lock");
            if guard.is_none() {
                let f = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
                *guard = Some(f);
            }
            let file = guard.as_mut().expect("file opened above");
            let line = serde_json::to_string(&entry).expect("entry serializes");
            writeln!(file, "{line}").map_err(io)?;
            file.flush().map_err(io)?;
        }
        self.entries
            .write()
            .expect("cache lock")
            .insert(entry.key.clone(), entry);
        Ok(())
    }
}
