use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::routing::get;
use axum::{Json, Router};
use poxverifi_core::checkworthiness::heuristic_score;
use poxverifi_core::classifier::Classifier;
use poxverifi_core::corpus::Verdict;
use poxverifi_core::headline::{canonicalize_url, extract_headline, parse_http_url, CanonicalUrl};
use poxverifi_core::similarity::get_similar_claims;
use poxverifi_core::votestore::{InstallationId, VoteError, VoteStore, VoteTally, VoteValue};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use crate::error::{ApiError, ErrorCode};
use crate::state::AppState;

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/headline_detection", get(headline_detection))
        .route("/ml_classification", get(ml_classification))
        .route("/get_similar_claims", get(similar_claims))
        .route("/votes", get(vote_tally).post(cast_vote).delete(revoke_vote))
        .route("/healthz", get(healthz))
        .fallback(|| async { ApiError::new(ErrorCode::NotFound, "no such route") })
        .method_not_allowed_fallback(|| async {
            ApiError::new(ErrorCode::MethodNotAllowed, "method not allowed on this route")
        })
        .layer(CorsLayer::permissive())
        .with_state(state)
}

fn required(value: Option<String>, name: &str) -> ApiResult<String> {
    value
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .ok_or_else(|| ApiError::invalid(format!("query parameter `{name}` is required")))
}

#[derive(Deserialize)]
struct UrlQuery {
    url: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HeadlineResponse {
    pub headline: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
}

async fn headline_detection(
    State(state): State<AppState>,
    query: Result<Query<UrlQuery>, QueryRejection>,
) -> ApiResult<Json<HeadlineResponse>> {
    let Query(q) = query?;
    let url = required(q.url, "url")?;
    parse_http_url(&url)?;
    let page = state.fetcher().fetch(&url).await?;
    let headline = extract_headline(&page.body)?;
    Ok(Json(HeadlineResponse {
        headline: headline.text,
        author: headline.author,
    }))
}

#[derive(Deserialize)]
struct HeadlineQuery {
    headline: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassificationResponse {
    pub checkworthy: bool,
    pub verdict: Option<Verdict>,
    pub probability: Option<f64>,
}

async fn ml_classification(
    State(state): State<AppState>,
    query: Result<Query<HeadlineQuery>, QueryRejection>,
) -> ApiResult<Json<ClassificationResponse>> {
    let Query(q) = query?;
    let headline = required(q.headline, "headline")?;
    let score = heuristic_score(&headline).value();
    if score < state.config().headline_checkworthy_threshold {
        return Ok(Json(ClassificationResponse {
            checkworthy: false,
            verdict: None,
            probability: None,
        }));
    }
    let model = state
        .model()
        .ok_or_else(|| ApiError::new(ErrorCode::ModelUnavailable, "no classifier model is loaded"))?;
    let prediction = model.predict(&headline);
    Ok(Json(ClassificationResponse {
        checkworthy: true,
        verdict: Some(prediction.verdict),
        probability: Some(prediction.probability),
    }))
}

#[derive(Deserialize)]
struct SimilarQuery {
    headline: Option<String>,
    page: Option<String>,
    page_size: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimilarClaim {
    pub claim_text: String,
    pub original_label: String,
    pub verdict: Verdict,
    pub score: u8,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimilarResponse {
    pub matches: Vec<SimilarClaim>,
    pub page: usize,
    pub page_size: usize,
    pub total_matches: usize,
}

fn paging_param(raw: Option<String>, name: &str, default: usize) -> ApiResult<usize> {
    match raw {
        None => Ok(default),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| ApiError::invalid(format!("`{name}` must be a non-negative integer"))),
    }
}

async fn similar_claims(
    State(state): State<AppState>,
    query: Result<Query<SimilarQuery>, QueryRejection>,
) -> ApiResult<Json<SimilarResponse>> {
    let Query(q) = query?;
    let headline = required(q.headline, "headline")?;
    let config = state.config();
    let page = paging_param(q.page, "page", 0)?;
    let page_size = paging_param(q.page_size, "page_size", config.default_page_size)?;
    if page_size == 0 || page_size > config.max_page_size {
        return Err(ApiError::invalid(format!(
            "`page_size` must be between 1 and {}",
            config.max_page_size
        )));
    }
    let result = get_similar_claims(&headline, state.corpus(), config.similarity_threshold, page, page_size);
    Ok(Json(SimilarResponse {
        matches: result
            .items
            .into_iter()
            .map(|m| SimilarClaim {
                claim_text: m.claim.text,
                original_label: m.claim.original_label.phrase().to_string(),
                verdict: m.claim.verdict,
                score: m.score.value(),
            })
            .collect(),
        page: result.page_index,
        page_size: result.page_size,
        total_matches: result.total_matches,
    }))
}

fn parse_installation(raw: &str) -> ApiResult<InstallationId> {
    Ok(raw.trim().parse::<InstallationId>()?)
}

fn parse_vote_url(raw: &str) -> ApiResult<CanonicalUrl> {
    Ok(canonicalize_url(raw.trim())?)
}

/// Runs a vote store call off the async executor; the store syncs to disk.
async fn with_votes<T, F>(state: &AppState, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&VoteStore) -> Result<T, VoteError> + Send + 'static,
{
    let store = state.votes();
    tokio::task::spawn_blocking(move || f(&store))
        .await
        .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))?
        .map_err(ApiError::from)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CastRequest {
    pub installation_id: String,
    pub url: String,
    pub value: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CastResponse {
    pub url: CanonicalUrl,
    pub value: VoteValue,
    pub cast_at: String,
}

async fn cast_vote(
    State(state): State<AppState>,
    body: Result<Json<CastRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<CastResponse>)> {
    let Json(req) = body?;
    let installation = parse_installation(&req.installation_id)?;
    let url = parse_vote_url(&req.url)?;
    let value: VoteValue = req.value.trim().parse()?;
    let record = with_votes(&state, move |s| s.cast_vote(&installation, &url, value)).await?;
    Ok((
        StatusCode::CREATED,
        Json(CastResponse {
            url: record.url,
            value: record.value,
            cast_at: record.cast_at,
        }),
    ))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RevokeRequest {
    pub installation_id: String,
    pub url: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RevokeResponse {
    pub url: CanonicalUrl,
    pub revoked: VoteValue,
}

async fn revoke_vote(
    State(state): State<AppState>,
    body: Result<Json<RevokeRequest>, JsonRejection>,
) -> ApiResult<Json<RevokeResponse>> {
    let Json(req) = body?;
    let installation = parse_installation(&req.installation_id)?;
    let url = parse_vote_url(&req.url)?;
    let key = url.clone();
    let revoked = with_votes(&state, move |s| s.revoke_vote(&installation, &key)).await?;
    Ok(Json(RevokeResponse { url, revoked }))
}

#[derive(Deserialize)]
struct TallyQuery {
    installation_id: Option<String>,
    url: Option<String>,
}

async fn vote_tally(
    State(state): State<AppState>,
    query: Result<Query<TallyQuery>, QueryRejection>,
) -> ApiResult<Json<VoteTally>> {
    let Query(q) = query?;
    let installation = parse_installation(&required(q.installation_id, "installation_id")?)?;
    let url = parse_vote_url(&required(q.url, "url")?)?;
    let tally = with_votes(&state, move |s| s.get_tally(&installation, &url)).await?;
    Ok(Json(tally))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub model_loaded: bool,
    pub corpus_size: usize,
}

async fn healthz(State(state): State<AppState>) -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        model_loaded: state.model().is_some(),
        corpus_size: state.corpus().len(),
    })
}
