//! HTTP contract checks shared by the API test-suite and the acceptance run.
//! Each check panics with a description on the first violation.

use reqwest::blocking::{Client, Response};
use reqwest::Method;
use serde_json::{json, Value};

use super::{fixture_site, fixture_corpus, fixture_model, TestApi};

const INSTALL_A: &str = "0123456789abcdef0123456789abcdef";
const INSTALL_B: &str = "fedcba9876543210fedcba9876543210";
const ARTICLE: &str = "https://news.example/2022/07/monkeypox-story";

fn client() -> Client {
    Client::new()
}

fn json_of(resp: Response) -> Value {
    let ct = resp
        .headers()
        .get("content-type")
        .and_then(|v| v.to_str().ok())
        .unwrap_or_default()
        .to_string();
    assert!(ct.starts_with("application/json"), "content-type {ct:?}");
    resp.json().unwrap()
}

fn expect(resp: Response, status: u16) -> Value {
    let got = resp.status().as_u16();
    let body = json_of(resp);
    assert_eq!(got, status, "body: {body}");
    body
}

fn expect_error(resp: Response, status: u16, code: &str) {
    let body = expect(resp, status);
    assert_eq!(body["error"]["code"], code, "body: {body}");
    assert!(body["error"]["message"].as_str().is_some_and(|m| !m.is_empty()), "body: {body}");
    assert_eq!(body.as_object().unwrap().len(), 1, "error envelope has one key: {body}");
}

pub fn healthz() {
    let corpus = fixture_corpus();
    let model = fixture_model(&corpus);
    let with_model = TestApi::start(Some(model), corpus.clone());
    let body = expect(client().get(with_model.url("/healthz")).send().unwrap(), 200);
    assert_eq!(body, json!({"status": "ok", "model_loaded": true, "corpus_size": 225}));
    let without = TestApi::start(None, corpus);
    let body = expect(client().get(without.url("/healthz")).send().unwrap(), 200);
    assert_eq!(body, json!({"status": "ok", "model_loaded": false, "corpus_size": 225}));
}

pub fn headline_detection() {
    let api = TestApi::start(None, fixture_corpus());
    let site = fixture_site();
    let c = client();
    let get = |url: &str| {
        c.get(api.url("/headline_detection"))
            .query(&[("url", url)])
            .send()
            .unwrap()
    };
    let body = expect(get(&site.url("/html/01_og_title.html")), 200);
    assert_eq!(
        body,
        json!({"headline": "Monkeypox vaccine supply expanded in 12 cities", "author": "Jane Reporter"})
    );
    let body = expect(get(&site.url("/html/03_title_only.html")), 200);
    assert_eq!(body, json!({"headline": "Outbreak update: what we know"}));
    expect_error(get(&site.url("/html/08_image_only.html")), 404, "no_headline");
    expect_error(get(&site.url("/report.pdf")), 502, "fetch_failed");
    expect_error(get(&site.url("/html/missing.html")), 502, "fetch_failed");
    expect_error(get("not a url"), 400, "invalid_request");
    expect_error(get("ftp://example.com/x"), 400, "invalid_request");
    expect_error(c.get(api.url("/headline_detection")).send().unwrap(), 400, "invalid_request");
}

pub fn ml_classification() {
    let corpus = fixture_corpus();
    let api = TestApi::start(Some(fixture_model(&corpus)), corpus.clone());
    let c = client();
    let get = |api: &TestApi, h: &str| {
        c.get(api.url("/ml_classification"))
            .query(&[("headline", h)])
            .send()
            .unwrap()
    };
    let body = expect(get(&api, "Wow!"), 200);
    assert_eq!(body, json!({"checkworthy": false, "verdict": null, "probability": null}));

    let body = expect(get(&api, "Monkeypox is caused by the Pfizer vaccine"), 200);
    assert_eq!(body["checkworthy"], true);
    assert!(matches!(body["verdict"].as_u64(), Some(0 | 1)), "{body}");
    let p = body["probability"].as_f64().unwrap();
    assert!(p > 0.0 && p < 1.0, "{body}");
    let v = body["verdict"].as_u64().unwrap();
    assert_eq!(v == 1, p >= 0.5, "verdict agrees with probability: {body}");

    expect_error(get(&api, ""), 400, "invalid_request");
    expect_error(get(&api, "   "), 400, "invalid_request");
    expect_error(c.get(api.url("/ml_classification")).send().unwrap(), 400, "invalid_request");

    let no_model = TestApi::start(None, corpus);
    expect_error(get(&no_model, "Monkeypox is caused by the Pfizer vaccine"), 503, "model_unavailable");
    expect(get(&no_model, "Wow!"), 200);
}

pub fn similar_claims() {
    let corpus = fixture_corpus();
    let api = TestApi::start(None, corpus);
    let c = client();
    let get = |params: &[(&str, &str)]| c.get(api.url("/get_similar_claims")).query(params).send().unwrap();

    let text = "Monkeypox vaccines contain tracking microchips";
    let body = expect(get(&[("headline", text)]), 200);
    assert_eq!(body["page"], 0);
    assert_eq!(body["page_size"], 5);
    let first = &body["matches"][0];
    assert_eq!(first["claim_text"], text);
    assert_eq!(first["score"], 100);
    assert_eq!(first["verdict"], 0);
    assert!(first["original_label"].is_string());
    let keys: Vec<_> = first.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys.len(), 4, "{keys:?}");
    let total = body["total_matches"].as_u64().unwrap();
    assert!(total >= 1);
    let scores: Vec<u64> = body["matches"].as_array().unwrap().iter().map(|m| m["score"].as_u64().unwrap()).collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1]) && scores.iter().all(|&s| s > 50 && s <= 100));

    let body = expect(get(&[("headline", "zebra quantum saxophone")]), 200);
    assert_eq!(body["total_matches"], 0);
    assert_eq!(body["matches"], json!([]));

    let body = expect(get(&[("headline", text), ("page", "50"), ("page_size", "3")]), 200);
    assert_eq!(body["matches"], json!([]));
    assert_eq!(body["total_matches"].as_u64(), Some(total));
    assert_eq!(body["page"], 50);
    assert_eq!(body["page_size"], 3);

    expect_error(get(&[("headline", text), ("page", "-1")]), 400, "invalid_request");
    expect_error(get(&[("headline", text), ("page", "x")]), 400, "invalid_request");
    expect_error(get(&[("headline", text), ("page_size", "0")]), 400, "invalid_request");
    expect_error(get(&[("headline", text), ("page_size", "1000")]), 400, "invalid_request");
    expect_error(get(&[("page", "0")]), 400, "invalid_request");
}

pub fn voting_and_gating() {
    let api = TestApi::start(None, fixture_corpus());
    let c = client();
    let tally = |install: &str, url: &str| {
        c.get(api.url("/votes"))
            .query(&[("installation_id", install), ("url", url)])
            .send()
            .unwrap()
    };
    let cast = |body: Value| c.post(api.url("/votes")).json(&body).send().unwrap();
    let revoke = |body: Value| c.delete(api.url("/votes")).json(&body).send().unwrap();

    expect_error(tally(INSTALL_A, ARTICLE), 403, "vote_required");

    let body = expect(cast(json!({"installation_id": INSTALL_A, "url": ARTICLE, "value": "true"})), 201);
    assert_eq!(body["url"], ARTICLE);
    assert_eq!(body["value"], "true");
    expect_error(
        cast(json!({"installation_id": INSTALL_A, "url": ARTICLE, "value": "fake"})),
        409,
        "already_voted",
    );
    // tracking parameters and fragments resolve to the same tally key
    let tracked = format!("{ARTICLE}/?utm_source=feed&fbclid=abc#comments");
    expect_error(
        cast(json!({"installation_id": INSTALL_A, "url": tracked, "value": "fake"})),
        409,
        "already_voted",
    );
    expect(cast(json!({"installation_id": INSTALL_B, "url": tracked, "value": "fake"})), 201);

    let body = expect(tally(INSTALL_A, ARTICLE), 200);
    assert_eq!(body, json!({"fake": 1, "mixed": 0, "true": 1}));

    expect_error(cast(json!({"installation_id": INSTALL_A, "url": ARTICLE, "value": "maybe"})), 400, "invalid_request");
    expect_error(cast(json!({"installation_id": "short", "url": ARTICLE, "value": "true"})), 400, "invalid_request");
    expect_error(cast(json!({"installation_id": INSTALL_A, "url": "not a url", "value": "true"})), 400, "invalid_request");
    expect_error(cast(json!({"installation_id": INSTALL_A, "url": ARTICLE})), 400, "invalid_request");
    expect_error(
        c.post(api.url("/votes")).header("content-type", "application/json").body("{oops").send().unwrap(),
        400,
        "invalid_request",
    );
    expect_error(
        c.post(api.url("/votes")).body(r#"{"installation_id":"a","url":"b","value":"true"}"#).send().unwrap(),
        400,
        "invalid_request",
    );
    expect_error(tally(INSTALL_A, ""), 400, "invalid_request");

    let body = expect(revoke(json!({"installation_id": INSTALL_A, "url": ARTICLE})), 200);
    assert_eq!(body["revoked"], "true");
    expect_error(tally(INSTALL_A, ARTICLE), 403, "vote_required");
    expect_error(revoke(json!({"installation_id": INSTALL_A, "url": ARTICLE})), 404, "not_voted");
    expect_error(
        revoke(json!({"installation_id": "fedcba9876543210fedcba98765432ff", "url": ARTICLE})),
        404,
        "not_voted",
    );

    // re-vote after revocation
    expect(cast(json!({"installation_id": INSTALL_A, "url": ARTICLE, "value": "mixed"})), 201);
    let body = expect(tally(INSTALL_A, ARTICLE), 200);
    assert_eq!(body, json!({"fake": 1, "mixed": 1, "true": 0}));
}

pub fn routing_and_cors() {
    let api = TestApi::start(None, fixture_corpus());
    let c = client();
    expect_error(c.get(api.url("/nope")).send().unwrap(), 404, "not_found");
    expect_error(c.put(api.url("/votes")).send().unwrap(), 405, "method_not_allowed");

    for method in ["POST", "DELETE"] {
        let resp = c
            .request(Method::OPTIONS, api.url("/votes"))
            .header("Origin", "chrome-extension://abcdefghijklmnop")
            .header("Access-Control-Request-Method", method)
            .header("Access-Control-Request-Headers", "content-type")
            .send()
            .unwrap();
        assert!(resp.status().is_success(), "preflight {method}: {}", resp.status());
        let h = resp.headers();
        assert!(h.contains_key("access-control-allow-origin"));
        let methods = h.get("access-control-allow-methods").unwrap().to_str().unwrap().to_string();
        assert!(methods == "*" || methods.contains(method), "{methods}");
    }
    let resp = c
        .get(api.url("/healthz"))
        .header("Origin", "chrome-extension://abcdefghijklmnop")
        .send()
        .unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
}

/// Every contract check, in order, for callers that run them as one unit.
pub const ALL: &[(&str, fn())] = &[
    ("healthz", healthz),
    ("headline_detection", headline_detection),
    ("ml_classification", ml_classification),
    ("get_similar_claims", similar_claims),
    ("votes", voting_and_gating),
    ("routing_and_cors", routing_and_cors),
];
