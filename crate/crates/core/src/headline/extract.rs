use scraper::{ElementRef, Html, Selector};
use serde::{Deserialize, Serialize};

use super::HeadlineError;

/// Headline of a news page plus its byline, when one is declared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Headline {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
}

fn clean(s: &str) -> Option<String> {
    let collapsed = s.split_whitespace().collect::<Vec<_>>().join(" ");
    (!collapsed.is_empty()).then_some(collapsed)
}

fn selector(css: &str) -> Selector {
    Selector::parse(css).expect("static selector")
}

fn meta_content(doc: &Html, attr: &str, value: &str) -> Option<String> {
    doc.select(&selector("meta"))
        .filter(|m| {
            m.value()
                .attr(attr)
                .is_some_and(|v| v.trim().eq_ignore_ascii_case(value))
        })
        .find_map(|m| m.value().attr("content").and_then(clean))
}

fn element_text(el: ElementRef<'_>) -> Option<String> {
    clean(&el.text().collect::<String>())
}

fn first_text(doc: &Html, css: &str) -> Option<String> {
    doc.select(&selector(css)).next().and_then(element_text)
}

/// Byline: `meta[name=author]`, then `meta[property=article:author]`, then
/// the first element whose `rel` includes `author`.
pub fn extract_author(html: &str) -> Option<String> {
    author_of(&Html::parse_document(html))
}

fn author_of(doc: &Html) -> Option<String> {
    meta_content(doc, "name", "author")
        .or_else(|| meta_content(doc, "property", "article:author"))
        .or_else(|| {
            doc.select(&selector("[rel]"))
                .find(|el| {
                    el.value()
                        .attr("rel")
                        .is_some_and(|rel| rel.split_whitespace().any(|r| r.eq_ignore_ascii_case("author")))
                })
                .and_then(element_text)
        })
}

/// Picks the first non-empty of `og:title`, `twitter:title`, `<title>` and
/// the first `<h1>`. Markup does not need to be well formed.
pub fn extract_headline(html: &str) -> Result<Headline, HeadlineError> {
    let doc = Html::parse_document(html);
    let text = meta_content(&doc, "property", "og:title")
        .or_else(|| meta_content(&doc, "name", "twitter:title"))
        .or_else(|| first_text(&doc, "title"))
        .or_else(|| first_text(&doc, "h1"))
        .ok_or(HeadlineError::NoHeadline)?;
    Ok(Headline {
        text,
        author: author_of(&doc),
    })
}
