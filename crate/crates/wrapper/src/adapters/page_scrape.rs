//! HTML pages to Article documents, via standard meta tags and heading patterns.
//!
//! Config: `pages` (whitespace or comma separated URLs) or `index` (a page whose
//! links are the pages to scrape); optional `lang` default for pages without
//! an `<html lang>`.

use scraper::{Html, Selector};
use semantify_core::annotation::{Item, Node, PropertyValue, DEFAULT_CONTEXT};
use semantify_core::domainspec::bundled_specs;
use semantify_core::validate::is_iso_date;
use semantify_core::{AnnotationDocument, DomainSpecification};
use serde_json::{json, Number, Value};

use crate::adapter::{Adapter, Config, FetchError, MapError};
use crate::cid::is_language_code;
use crate::model::{AdapterDescriptor, ConfigKey, SourceRecord};

pub const ADAPTER_ID: &str = "page_scrape";

pub struct PageScrape {
    descriptor: AdapterDescriptor,
    spec: DomainSpecification,
    http: reqwest::blocking::Client,
}

impl Default for PageScrape {
    fn default() -> Self {
        Self::new()
    }
}

fn sel(s: &str) -> Selector {
    Selector::parse(s).expect("static selector")
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn meta(html: &Html, selectors: &[&str]) -> Option<String> {
    selectors.iter().find_map(|s| {
        html.select(&sel(s))
            .filter_map(|e| e.value().attr("content").or_else(|| e.value().attr("datetime")))
            .map(squash)
            .find(|v| !v.is_empty())
    })
}

fn element_text(html: &Html, selector: &str) -> Option<String> {
    html.select(&sel(selector))
        .map(|e| squash(&e.text().collect::<String>()))
        .find(|t| !t.is_empty())
}

/// Two-letter code from `<html lang="de-AT">`.
pub fn page_language(html: &Html) -> Option<String> {
    let lang = html.select(&sel("html")).next()?.value().attr("lang")?;
    let code = lang.split(['-', '_']).next()?.trim().to_ascii_lowercase();
    is_language_code(&code).then_some(code)
}

impl PageScrape {
    pub fn new() -> Self {
        PageScrape {
            descriptor: AdapterDescriptor {
                adapter_id: ADAPTER_ID.into(),
                display_name: "Web page scraper".into(),
                config_schema: vec![ConfigKey::optional("pages"), ConfigKey::optional("index"), ConfigKey::optional("lang")],
                languages: vec!["de".into(), "en".into()],
            },
            spec: bundled_specs()
                .into_iter()
                .find(|d| d.ds_id.0 == "article")
                .expect("bundled article specification"),
            http: reqwest::blocking::Client::new(),
        }
    }

    fn get(&self, url: &str) -> Result<String, String> {
        self.http
            .get(url)
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.text())
            .map_err(|e| e.to_string())
    }

    fn page_urls(&self, config: &Config) -> Result<Vec<String>, FetchError> {
        if let Some(pages) = config.get("pages").filter(|p| !p.trim().is_empty()) {
            return Ok(pages.split([',', ' ', '\n', '\t']).filter(|s| !s.is_empty()).map(str::to_string).collect());
        }
        let index = config
            .get("index")
            .filter(|p| !p.trim().is_empty())
            .ok_or_else(|| FetchError::ConfigInvalid("either pages or index is required".into()))?;
        let base = reqwest::Url::parse(index).map_err(|e| FetchError::ConfigInvalid(format!("index: {e}")))?;
        let body = self.get(index).map_err(FetchError::SourceUnreachable)?;
        let doc = Html::parse_document(&body);
        let mut urls: Vec<String> = Vec::new();
        for a in doc.select(&sel("a[href]")) {
            let Ok(mut url) = base.join(a.value().attr("href").unwrap_or_default()) else {
                continue;
            };
            url.set_fragment(None);
            let url = url.to_string();
            if url.starts_with("http") && !urls.contains(&url) {
                urls.push(url);
            }
        }
        Ok(urls)
    }
}

impl Adapter for PageScrape {
    fn descriptor(&self) -> &AdapterDescriptor {
        &self.descriptor
    }

    fn domain_spec(&self) -> &DomainSpecification {
        &self.spec
    }

    /// A page that fails to load becomes a record without html, which then fails
    /// on its own; only an unreachable index aborts the run.
    fn fetch(&self, config: &Config) -> Result<Vec<SourceRecord>, FetchError> {
        let default_lang = config.get("lang").cloned().unwrap_or_else(|| "en".into());
        let urls = self.page_urls(config)?;
        Ok(urls
            .into_iter()
            .map(|url| match self.get(&url) {
                Ok(html) => {
                    let language = page_language(&Html::parse_document(&html)).unwrap_or_else(|| default_lang.clone());
                    SourceRecord {
                        source_id: url.clone(),
                        language,
                        payload: json!({"url": url, "html": html}),
                    }
                }
                Err(e) => SourceRecord {
                    source_id: url.clone(),
                    language: default_lang.clone(),
                    payload: json!({"url": url, "error": e}),
                },
            })
            .collect())
    }

    fn map(&self, record: &SourceRecord) -> Result<AnnotationDocument, MapError> {
        if let Some(e) = record.payload.get("error").and_then(Value::as_str) {
            return Err(MapError::Unexpected(format!("PageUnreachable: {e}")));
        }
        let url = record
            .payload
            .get("url")
            .and_then(Value::as_str)
            .ok_or_else(|| MapError::Unexpected("record has no url".into()))?;
        let source = record
            .payload
            .get("html")
            .and_then(Value::as_str)
            .ok_or_else(|| MapError::Unexpected("record has no html".into()))?;
        let html = Html::parse_document(source);
        let title = meta(&html, &[r#"meta[property="og:title"]"#])
            .or_else(|| element_text(&html, "title"))
            .or_else(|| element_text(&html, "h1"))
            .ok_or_else(|| MapError::Unmappable("NoTitle".into()))?;

        let mut node = Node::new("Article").with_text("headline", title).with_text("url", url);
        if let Some(d) = meta(&html, &[r#"meta[name="description"]"#, r#"meta[property="og:description"]"#]) {
            node = node.with_text("description", d);
        }
        if let Some(author) = meta(&html, &[r#"meta[name="author"]"#, r#"meta[property="article:author"]"#]) {
            node = node.with(
                "author",
                PropertyValue::Many(vec![Item::Node(Box::new(Node::new("Person").with_text("name", author)))]),
            );
        }
        let date = meta(
            &html,
            &[r#"meta[property="article:published_time"]"#, r#"meta[name="date"]"#, r#"meta[name="dcterms.date"]"#, "time[datetime]"],
        );
        match date.as_deref().map(|d| d.get(..10).unwrap_or(d)) {
            Some(d) if is_iso_date(d) => node = node.with_text("datePublished", d),
            Some(d) => tracing::debug!(url, date = d, "unparseable date dropped"),
            None => {}
        }
        if let Some(body) = element_text(&html, "article") {
            let words = body.split_whitespace().count() as u64;
            node = node.with("wordCount", PropertyValue::One(Item::Number(Number::from(words))));
        }
        AnnotationDocument::from_node(DEFAULT_CONTEXT, node).map_err(|e| MapError::Unexpected(e.to_string()))
    }
}
