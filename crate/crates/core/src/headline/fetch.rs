use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::url::parse_http_url;
use super::FetchError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FetchLimits {
    pub timeout_ms: u64,
    pub max_body_bytes: usize,
    pub max_redirects: usize,
    pub user_agent: String,
}

impl Default for FetchLimits {
    fn default() -> Self {
        Self {
            timeout_ms: 10_000,
            max_body_bytes: 5 * 1024 * 1024,
            max_redirects: 5,
            user_agent: concat!("poxverifi/", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageContent {
    pub final_url: String,
    pub body: String,
    pub content_type: String,
}

fn is_html(content_type: &str) -> bool {
    let essence = content_type
        .split(';')
        .next()
        .unwrap_or_default()
        .trim()
        .to_ascii_lowercase();
    essence == "text/html" || essence == "application/xhtml+xml"
}

/// HTTP client for news pages. Clones share one connection pool; every
/// request gets its own timeout.
#[derive(Debug, Clone)]
pub struct PageFetcher {
    client: reqwest::Client,
    limits: FetchLimits,
}

impl PageFetcher {
    pub fn new(limits: FetchLimits) -> Result<Self, FetchError> {
        let client = reqwest::Client::builder()
            .redirect(reqwest::redirect::Policy::limited(limits.max_redirects))
            .timeout(Duration::from_millis(limits.timeout_ms))
            .user_agent(limits.user_agent.clone())
            .build()
            .map_err(|e| FetchError::Network(e.to_string()))?;
        Ok(Self { client, limits })
    }

    pub fn limits(&self) -> &FetchLimits {
        &self.limits
    }

    /// GETs `url`, following up to `max_redirects` redirects, and returns
    /// the body if it is HTML and within the size cap.
    pub async fn fetch(&self, url: &str) -> Result<PageContent, FetchError> {
        let url = parse_http_url(url).map_err(|e| FetchError::InvalidUrl(e.to_string()))?;
        let mut response = self.client.get(url).send().await.map_err(|e| {
            if e.is_redirect() {
                FetchError::TooManyRedirects(self.limits.max_redirects)
            } else {
                FetchError::Network(e.to_string())
            }
        })?;
        if !response.status().is_success() {
            return Err(FetchError::Status(response.status().as_u16()));
        }
        let content_type = response
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .unwrap_or_default()
            .to_string();
        if !is_html(&content_type) {
            return Err(FetchError::NonHtmlContent(content_type));
        }
        let cap = self.limits.max_body_bytes;
        if response.content_length().is_some_and(|len| len > cap as u64) {
            return Err(FetchError::BodyTooLarge(cap));
        }
        let final_url = response.url().to_string();
        let mut body = Vec::new();
        while let Some(chunk) = response
            .chunk()
            .await
            .map_err(|e| FetchError::Network(e.to_string()))?
        {
            if body.len() + chunk.len() > cap {
                return Err(FetchError::BodyTooLarge(cap));
            }
            body.extend_from_slice(&chunk);
        }
        Ok(PageContent {
            final_url,
            body: String::from_utf8_lossy(&body).into_owned(),
            content_type,
        })
    }
}

/// One-off fetch with a fresh client.
pub async fn fetch_page(url: &str, limits: &FetchLimits) -> Result<PageContent, FetchError> {
    PageFetcher::new(limits.clone())?.fetch(url).await
}
