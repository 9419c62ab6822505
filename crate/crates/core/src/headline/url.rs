use std::fmt;

use serde::{Deserialize, Serialize};
use url::Url;

use super::HeadlineError;

const TRACKING_PARAMS: &[&str] = &["fbclid", "gclid"];

/// Normalized absolute URL used as a vote key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalUrl(String);

impl CanonicalUrl {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalUrl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalUrl {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn is_tracking(pair: &str) -> bool {
    let name = pair.split('=').next().unwrap_or_default().to_ascii_lowercase();
    name.starts_with("utm_") || TRACKING_PARAMS.contains(&name.as_str())
}

/// Parses an absolute http(s) URL.
pub fn parse_http_url(raw: &str) -> Result<Url, HeadlineError> {
    let url = Url::parse(raw.trim()).map_err(|e| HeadlineError::MalformedUrl(format!("{raw}: {e}")))?;
    if !matches!(url.scheme(), "http" | "https") || url.host_str().is_none() {
        return Err(HeadlineError::MalformedUrl(format!("{raw}: not an http(s) URL")));
    }
    Ok(url)
}

/// Lowercases scheme and host, drops the fragment, default ports and
/// tracking parameters (`utm_*`, `fbclid`, `gclid`), and strips trailing
/// slashes from non-root paths. Remaining parameters keep their order and
/// encoding.
pub fn canonicalize_url(raw: &str) -> Result<CanonicalUrl, HeadlineError> {
    let mut url = parse_http_url(raw)?;
    url.set_fragment(None);

    let kept: Vec<String> = url
        .query()
        .unwrap_or_default()
        .split('&')
        .filter(|p| !p.is_empty() && !is_tracking(p))
        .map(str::to_string)
        .collect();
    url.set_query((!kept.is_empty()).then(|| kept.join("&")).as_deref());

    let path = url.path().to_string();
    if path != "/" && path.ends_with('/') {
        let trimmed = path.trim_end_matches('/');
        url.set_path(if trimmed.is_empty() { "/" } else { trimmed });
    }
    Ok(CanonicalUrl(url.into()))
}
