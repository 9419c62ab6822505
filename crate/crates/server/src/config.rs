//! Service configuration: an optional TOML file, then environment overrides.

use std::path::{Path, PathBuf};

use poxverifi_core::headline::FetchLimits;
use poxverifi_core::similarity::{DEFAULT_PAGE_SIZE, DEFAULT_THRESHOLD};
use poxverifi_core::votestore::DEFAULT_SNAPSHOT_EVERY;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("environment variable {var}={value:?} is invalid")]
    InvalidEnv { var: &'static str, value: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub bind_addr: String,
    pub port: u16,
    pub data_dir: PathBuf,
    pub model_path: Option<PathBuf>,
    pub corpus_path: Option<PathBuf>,
    /// External check-worthiness scorer, used by article ingestion.
    pub scorer_url: Option<String>,
    pub similarity_threshold: u8,
    pub headline_checkworthy_threshold: f64,
    pub default_page_size: usize,
    pub max_page_size: usize,
    pub snapshot_every: usize,
    pub fetch: FetchLimits,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            bind_addr: "0.0.0.0".into(),
            port: 8080,
            data_dir: PathBuf::from("data"),
            model_path: None,
            corpus_path: None,
            scorer_url: None,
            similarity_threshold: DEFAULT_THRESHOLD,
            headline_checkworthy_threshold: 0.5,
            default_page_size: DEFAULT_PAGE_SIZE,
            max_page_size: 100,
            snapshot_every: DEFAULT_SNAPSHOT_EVERY,
            fetch: FetchLimits::default(),
        }
    }
}

fn parse_env<T: std::str::FromStr>(var: &'static str, value: String) -> Result<T, ConfigError> {
    value
        .trim()
        .parse()
        .map_err(|_| ConfigError::InvalidEnv { var, value })
}

impl ServerConfig {
    pub fn from_toml(raw: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(raw).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Reads `path` (defaults if `None`), applies process environment
    /// overrides and validates.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(p) => {
                let raw = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                Self::from_toml(&raw, p)?
            }
            None => Self::default(),
        };
        config.apply_overrides(|k| std::env::var(k).ok())?;
        config.validate()?;
        Ok(config)
    }

    /// Applies overrides from `lookup`; empty values are ignored.
    pub fn apply_overrides(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        let get = |k: &str| lookup(k).filter(|v| !v.trim().is_empty());
        if let Some(v) = get("BIND_ADDR") {
            self.bind_addr = v;
        }
        if let Some(v) = get("PORT") {
            self.port = parse_env("PORT", v)?;
        }
        if let Some(v) = get("DATA_DIR") {
            self.data_dir = v.into();
        }
        if let Some(v) = get("MODEL_PATH") {
            self.model_path = Some(v.into());
        }
        if let Some(v) = get("CORPUS_PATH") {
            self.corpus_path = Some(v.into());
        }
        if let Some(v) = get("SCORER_URL") {
            self.scorer_url = Some(v);
        }
        if let Some(v) = get("SIMILARITY_THRESHOLD") {
            self.similarity_threshold = parse_env("SIMILARITY_THRESHOLD", v)?;
        }
        if let Some(v) = get("HEADLINE_CHECKWORTHY_THRESHOLD") {
            self.headline_checkworthy_threshold = parse_env("HEADLINE_CHECKWORTHY_THRESHOLD", v)?;
        }
        if let Some(v) = get("PAGE_SIZE") {
            self.default_page_size = parse_env("PAGE_SIZE", v)?;
        }
        if let Some(v) = get("FETCH_TIMEOUT_MS") {
            self.fetch.timeout_ms = parse_env("FETCH_TIMEOUT_MS", v)?;
        }
        if let Some(v) = get("FETCH_MAX_BODY_BYTES") {
            self.fetch.max_body_bytes = parse_env("FETCH_MAX_BODY_BYTES", v)?;
        }
        if let Some(v) = get("FETCH_MAX_REDIRECTS") {
            self.fetch.max_redirects = parse_env("FETCH_MAX_REDIRECTS", v)?;
        }
        if let Some(v) = get("FETCH_USER_AGENT") {
            self.fetch.user_agent = v;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.similarity_threshold > 100 {
            return Err(ConfigError::Invalid("similarity_threshold must be in 0..=100".into()));
        }
        if !(0.0..=1.0).contains(&self.headline_checkworthy_threshold) {
            return Err(ConfigError::Invalid(
                "headline_checkworthy_threshold must be in [0, 1]".into(),
            ));
        }
        if self.default_page_size == 0 || self.default_page_size > self.max_page_size {
            return Err(ConfigError::Invalid(
                "default_page_size must be between 1 and max_page_size".into(),
            ));
        }
        Ok(())
    }
}
