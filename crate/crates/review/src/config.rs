use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

/// Service settings. Read from a TOML file, then overridden by
/// `CSWUD_LISTEN`, `CSWUD_STORE`, `CSWUD_GROUPS` and `CSWUD_UI_DIR`.
///
/// ```toml
/// listen = "127.0.0.1:8080"
/// store = "review/store.jsonl"
/// groups = "fixtures/equivalence_groups.json"
/// ui_dir = "review_ui/dist"
/// snapshot_every = 100
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub store: PathBuf,
    pub groups: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
    pub snapshot_every: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            store: PathBuf::from("review-store.jsonl"),
            groups: None,
            ui_dir: None,
            snapshot_every: 100,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("{var}: {message}")]
    Env { var: &'static str, message: String },
}

impl ServiceConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_string(),
            source,
        })
    }

    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.display().to_string(),
                    source,
                })?;
                Self::from_toml(&text, &p.display().to_string())?
            }
            None => ServiceConfig::default(),
        };
        cfg.with_env(|k| std::env::var(k).ok())
    }

    /// Applies overrides from an environment lookup.
    pub fn with_env(mut self, get: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        if let Some(v) = get("CSWUD_LISTEN") {
            self.listen = v.parse().map_err(|e: std::net::AddrParseError| ConfigError::Env {
                var: "CSWUD_LISTEN",
                message: e.to_string(),
            })?;
        }
        if let Some(v) = get("CSWUD_STORE") {
            self.store = PathBuf::from(v);
        }
        if let Some(v) = get("CSWUD_GROUPS") {
            self.groups = Some(PathBuf::from(v));
        }
        if let Some(v) = get("CSWUD_UI_DIR") {
            self.ui_dir = Some(PathBuf::from(v));
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env() {
        let cfg = ServiceConfig::from_toml("listen = \"0.0.0.0:9000\"\nstore = \"s.jsonl\"\n", "t").unwrap();
        assert_eq!(cfg.listen.port(), 9000);
        assert_eq!(cfg.snapshot_every, 100);
        let cfg = cfg
            .with_env(|k| (k == "CSWUD_STORE").then(|| "other.jsonl".to_string()))
            .unwrap();
        assert_eq!(cfg.store, PathBuf::from("other.jsonl"));
        assert!(ServiceConfig::from_toml("listen = 3\n", "t").is_err());
        assert!(ServiceConfig::from_toml("bogus = 1\n", "t").is_err());
    }

    #[test]
    fn bad_env_listen() {
        let err = ServiceConfig::default().with_env(|k| (k == "CSWUD_LISTEN").then(|| "nope".into()));
        assert!(matches!(
            err,
            Err(ConfigError::Env {
                var: "CSWUD_LISTEN",
                ..
            })
        ));
    }
}
