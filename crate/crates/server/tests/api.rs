//! HTTP contract of every route, run against an in-process server.

mod common;

use common::contract;

#[test]
fn healthz() {
    contract::healthz();
}

#[test]
fn headline_detection() {
    contract::headline_detection();
}

#[test]
fn ml_classification() {
    contract::ml_classification();
}

#[test]
fn similar_claims() {
    contract::similar_claims();
}

#[test]
fn voting_and_gating() {
    contract::voting_and_gating();
}

#[test]
fn routing_and_cors() {
    contract::routing_and_cors();
}

#[test]
fn votes_survive_a_server_restart() {
    use poxverifi_core::corpus::Corpus;
    use poxverifi_core::votestore::VoteStore;
    use poxverifi_server::{router, AppState, ServerConfig};
    use serde_json::json;

    let dir = tempfile::tempdir().unwrap();
    let start = || {
        let config = ServerConfig {
            data_dir: dir.path().to_path_buf(),
            ..ServerConfig::default()
        };
        let votes = VoteStore::open(dir.path()).unwrap();
        common::Background::serve(router(AppState::new(config, None, Corpus::new(), votes).unwrap()))
    };
    let c = reqwest::blocking::Client::new();
    let body = json!({"installation_id": "0123456789abcdef0123456789abcdef", "url": "https://a.example/x", "value": "fake"});
    {
        let server = start();
        assert_eq!(c.post(server.url("/votes")).json(&body).send().unwrap().status(), 201);
    }
    let server = start();
    let resp = c
        .get(server.url("/votes"))
        .query(&[("installation_id", "0123456789abcdef0123456789abcdef"), ("url", "https://a.example/x")])
        .send()
        .unwrap();
    assert_eq!(resp.status(), 200);
    assert_eq!(resp.json::<serde_json::Value>().unwrap(), json!({"fake": 1, "mixed": 0, "true": 0}));
}
