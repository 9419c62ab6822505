#![allow(dead_code)]

pub mod contract;

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::extract::Path;
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use poxverifi_core::checkworthiness::{HeuristicScorer, CORPUS_THRESHOLD};
use poxverifi_core::classifier::{train, ModelArtifact, TrainConfig};
use poxverifi_core::corpus::{
    ingest_articles, ingest_factcheck_feed, parse_articles, Corpus, LabelAliases,
};
use poxverifi_core::votestore::VoteStore;
use poxverifi_server::{router, AppState, ServerConfig};
use tokio::sync::oneshot;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

pub fn fixture_corpus() -> Corpus {
    let feed = ingest_factcheck_feed(&read_fixture("feed/monkeypox_feed.jsonl"), &LabelAliases::default()).unwrap();
    let (articles, _) = parse_articles(&read_fixture("articles/who_articles.jsonl"));
    let who = ingest_articles(&articles, &HeuristicScorer, CORPUS_THRESHOLD).unwrap();
    let mut corpus = Corpus::from_claims(feed.claims).unwrap();
    corpus.extend(who.claims).unwrap();
    corpus
}

pub fn fixture_model(corpus: &Corpus) -> ModelArtifact {
    train(corpus.claims(), &TrainConfig::default()).unwrap()
}

/// Serves a router from its own runtime thread until dropped.
pub struct Background {
    pub addr: SocketAddr,
    stop: Option<oneshot::Sender<()>>,
    thread: Option<std::thread::JoinHandle<()>>,
}

impl Background {
    pub fn serve(app: Router) -> Self {
        let (addr_tx, addr_rx) = std::sync::mpsc::channel();
        let (stop, stopped) = oneshot::channel::<()>();
        let thread = std::thread::spawn(move || {
            let rt = tokio::runtime::Runtime::new().unwrap();
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
                addr_tx.send(listener.local_addr().unwrap()).unwrap();
                axum::serve(listener, app)
                    .with_graceful_shutdown(async {
                        let _ = stopped.await;
                    })
                    .await
                    .unwrap();
            });
        });
        Self {
            addr: addr_rx.recv().unwrap(),
            stop: Some(stop),
            thread: Some(thread),
        }
    }

    pub fn url(&self, path: &str) -> String {
        format!("http://{}{}", self.addr, path)
    }
}

impl Drop for Background {
    fn drop(&mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

/// A running API server over a temporary data directory.
pub struct TestApi {
    pub server: Background,
    pub data_dir: tempfile::TempDir,
}

impl TestApi {
    pub fn start(model: Option<ModelArtifact>, corpus: Corpus) -> Self {
        let data_dir = tempfile::tempdir().unwrap();
        let config = ServerConfig {
            data_dir: data_dir.path().to_path_buf(),
            ..ServerConfig::default()
        };
        let votes = VoteStore::open(data_dir.path()).unwrap();
        // PageFetcher builds a reqwest client; keep that outside any runtime.
        let state = AppState::new(config, model, corpus, votes).unwrap();
        Self {
            server: Background::serve(router(state)),
            data_dir,
        }
    }

    pub fn url(&self, path: &str) -> String {
        self.server.url(path)
    }
}

async fn fixture_page(Path(name): Path<String>) -> impl IntoResponse {
    match std::fs::read_to_string(fixture(&format!("html/{name}"))) {
        Ok(body) => ([(header::CONTENT_TYPE, "text/html; charset=utf-8")], body).into_response(),
        Err(_) => StatusCode::NOT_FOUND.into_response(),
    }
}

/// Stand-in news site serving `fixtures/html/*` plus a PDF.
pub fn fixture_site() -> Background {
    Background::serve(
        Router::new()
            .route("/html/{name}", get(fixture_page))
            .route(
                "/report.pdf",
                get(|| async { ([(header::CONTENT_TYPE, "application/pdf")], "%PDF-1.7") }),
            ),
    )
}
