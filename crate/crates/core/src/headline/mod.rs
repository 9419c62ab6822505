//! Headline and byline extraction from news pages, page fetching, and URL
//! canonicalization for vote keys.

mod extract;
mod fetch;
mod url;

use thiserror::Error;

pub use extract::{extract_author, extract_headline, Headline};
pub use fetch::{fetch_page, FetchLimits, PageContent, PageFetcher};
pub use url::{canonicalize_url, parse_http_url, CanonicalUrl};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeadlineError {
    #[error("no headline found on the page")]
    NoHeadline,
    #[error("malformed URL: {0}")]
    MalformedUrl(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FetchError {
    #[error("invalid URL: {0}")]
    InvalidUrl(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("upstream answered HTTP {0}")]
    Status(u16),
    #[error("content type {0:?} is not HTML")]
    NonHtmlContent(String),
    #[error("body exceeds {0} bytes")]
    BodyTooLarge(usize),
    #[error("more than {0} redirects")]
    TooManyRedirects(usize),
}
