//! Headline and byline extraction over the HTML fixture pages.

mod common;

use poxverifi_core::headline::{extract_author, extract_headline, HeadlineError};
use serde::Deserialize;

#[derive(Deserialize)]
struct Expectation {
    file: String,
    headline: Option<String>,
    author: Option<String>,
}

#[test]
fn html_fixture_suite() {
    let cases: Vec<Expectation> = serde_json::from_str(&common::read_fixture("html/expected.json")).unwrap();
    assert_eq!(cases.len(), 10);
    for case in cases {
        let html = common::read_fixture(&format!("html/{}", case.file));
        match (extract_headline(&html), &case.headline) {
            (Ok(h), Some(want)) => {
                assert_eq!(&h.text, want, "{}", case.file);
                assert_eq!(h.author, case.author, "{}", case.file);
            }
            (Err(HeadlineError::NoHeadline), None) => {}
            (got, want) => panic!("{}: got {got:?}, want {want:?}", case.file),
        }
        assert_eq!(extract_author(&html), case.author, "{}", case.file);
    }
}
