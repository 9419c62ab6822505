use std::sync::Arc;

use poxverifi_core::classifier::{load_model, ClassifierError, ModelArtifact};
use poxverifi_core::corpus::{Corpus, CorpusError};
use poxverifi_core::headline::{FetchError, PageFetcher};
use poxverifi_core::votestore::{VoteError, VoteStore};
use thiserror::Error;

use crate::config::{ConfigError, ServerConfig};

#[derive(Debug, Error)]
pub enum StartupError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("loading model: {0}")]
    Model(#[from] ClassifierError),
    #[error("loading corpus: {0}")]
    Corpus(#[from] CorpusError),
    #[error("opening vote store: {0}")]
    Votes(#[from] VoteError),
    #[error("building HTTP client: {0}")]
    Fetcher(#[from] FetchError),
    #[error("binding {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
}

/// Shared, read-mostly request state. The model and corpus never change
/// after startup; the vote store serializes its own updates.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    config: ServerConfig,
    model: Option<ModelArtifact>,
    corpus: Corpus,
    votes: Arc<VoteStore>,
    fetcher: PageFetcher,
}

impl AppState {
    pub fn new(
        config: ServerConfig,
        model: Option<ModelArtifact>,
        corpus: Corpus,
        votes: VoteStore,
    ) -> Result<Self, StartupError> {
        let fetcher = PageFetcher::new(config.fetch.clone())?;
        Ok(Self {
            inner: Arc::new(Inner {
                config,
                model,
                corpus,
                votes: Arc::new(votes),
                fetcher,
            }),
        })
    }

    /// Loads the model, corpus and vote store named by `config`. A configured
    /// model or corpus file that does not exist yet is logged and skipped, so
    /// the service can come up before training; an unreadable one is fatal.
    pub fn from_config(config: ServerConfig) -> Result<Self, StartupError> {
        let model = match &config.model_path {
            Some(p) if p.exists() => Some(load_model(p)?),
            Some(p) => {
                tracing::warn!(path = %p.display(), "model file not found; classification disabled");
                None
            }
            None => None,
        };
        let corpus = match &config.corpus_path {
            Some(p) if p.exists() => Corpus::load(p)?,
            Some(p) => {
                tracing::warn!(path = %p.display(), "corpus file not found; starting empty");
                Corpus::new()
            }
            None => Corpus::new(),
        };
        let votes = VoteStore::open_with(&config.data_dir, config.snapshot_every)?;
        tracing::info!(
            model_loaded = model.is_some(),
            corpus_size = corpus.len(),
            data_dir = %config.data_dir.display(),
            "state loaded"
        );
        Self::new(config, model, corpus, votes)
    }

    pub fn config(&self) -> &ServerConfig {
        &self.inner.config
    }

    pub fn model(&self) -> Option<&ModelArtifact> {
        self.inner.model.as_ref()
    }

    pub fn corpus(&self) -> &Corpus {
        &self.inner.corpus
    }

    pub fn votes(&self) -> Arc<VoteStore> {
        self.inner.votes.clone()
    }

    pub fn fetcher(&self) -> &PageFetcher {
        &self.inner.fetcher
    }
}
