use std::time::Duration;

use semantify_core::AnnotationDocument;
use serde::Deserialize;

use crate::model::PlatformTarget;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PushOutcome {
    Created(String),
    Replaced(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PushError {
    #[error("platform unreachable: {0}")]
    Network(String),
    #[error("platform answered {status}: {body}")]
    Http { status: u16, body: String },
    #[error("document rejected ({code}): {message}")]
    Rejected { code: String, message: String },
}

/// Destination of mapped documents.
pub trait Platform: Sync {
    fn push(&self, doc: &AnnotationDocument, cid: &str) -> Result<PushOutcome, PushError>;
}

#[derive(Deserialize)]
struct ItemError {
    code: String,
    message: String,
}

#[derive(Deserialize)]
struct Item {
    ok: bool,
    hash: Option<String>,
    created: Option<bool>,
    error: Option<ItemError>,
}

/// Pushes through `POST /api/annotation/{apiKey}?cid=`.
pub struct HttpPlatform {
    target: PlatformTarget,
    client: reqwest::blocking::Client,
}

impl HttpPlatform {
    pub fn new(target: PlatformTarget) -> Self {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(30))
            .build()
            .expect("http client builds");
        HttpPlatform { target, client }
    }
}

impl Platform for HttpPlatform {
    fn push(&self, doc: &AnnotationDocument, cid: &str) -> Result<PushOutcome, PushError> {
        let url = format!("{}/api/annotation/{}", self.target.endpoint.trim_end_matches('/'), self.target.api_key);
        let resp = self
            .client
            .post(url)
            .query(&[("cid", cid)])
            .header(reqwest::header::CONTENT_TYPE, "application/ld+json")
            .body(doc.canonical().to_string())
            .send()
            .map_err(|e| PushError::Network(e.to_string()))?;
        let status = resp.status();
        let text = resp.text().map_err(|e| PushError::Network(e.to_string()))?;
        if !status.is_success() {
            return Err(PushError::Http {
                status: status.as_u16(),
                body: text,
            });
        }
        let items: Vec<Item> = serde_json::from_str(&text).map_err(|e| PushError::Http {
            status: status.as_u16(),
            body: format!("unexpected response ({e}): {text}"),
        })?;
        let item = items.into_iter().next().ok_or_else(|| PushError::Http {
            status: status.as_u16(),
            body: "empty result list".into(),
        })?;
        match (item.ok, item.hash, item.created) {
            (true, Some(hash), Some(true)) => Ok(PushOutcome::Created(hash)),
            (true, Some(hash), Some(false)) => Ok(PushOutcome::Replaced(hash)),
            _ => {
                let e = item.error.unwrap_or(ItemError {
                    code: "Unknown".into(),
                    message: text,
                });
                Err(PushError::Rejected {
                    code: e.code,
                    message: e.message,
                })
            }
        }
    }
}
