//! Client side of the platform: resolve an annotation by hash, page URL or
//! custom id and embed it in an HTML page as a JSON-LD script element.
//!
//! HTML is handled textually. Only the insertion point is searched for; every
//! other byte of the page is left as it was.

use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime};

use semantify_core::url_retrieval_key;
use sha2::{Digest, Sha256};

pub const SCRIPT_OPEN: &str = r#"<script type="application/ld+json">"#;
pub const SCRIPT_CLOSE: &str = "</script>";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    ByHash,
    ByPageUrl,
    ByCid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionSpec {
    pub mode: Mode,
    pub key: String,
    pub api_key: Option<String>,
    pub endpoint: String,
}

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("annotation not found")]
    NotFound,
    #[error("unauthorized: {0}")]
    Unauthorized(String),
    #[error("network error: {0}")]
    NetworkError(String),
    #[error("invalid request: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InjectError {
    #[error("no </head> found outside comments")]
    NoHeadElement,
    #[error("annotation is not JSON: {0}")]
    InvalidAnnotation(String),
}

impl InjectionSpec {
    pub fn by_hash(endpoint: &str, hash: &str) -> Self {
        InjectionSpec {
            mode: Mode::ByHash,
            key: hash.into(),
            api_key: None,
            endpoint: endpoint.into(),
        }
    }

    pub fn by_page_url(endpoint: &str, url: &str, api_key: &str) -> Self {
        InjectionSpec {
            mode: Mode::ByPageUrl,
            key: url.into(),
            api_key: Some(api_key.into()),
            endpoint: endpoint.into(),
        }
    }

    pub fn by_cid(endpoint: &str, cid: &str, api_key: &str) -> Self {
        InjectionSpec {
            mode: Mode::ByCid,
            key: cid.into(),
            api_key: Some(api_key.into()),
            endpoint: endpoint.into(),
        }
    }

    /// Full URL of the shortener route this spec resolves through.
    pub fn route(&self) -> Result<String, FetchError> {
        let mut url = reqwest::Url::parse(&self.endpoint).map_err(|e| FetchError::InvalidSpec(format!("endpoint: {e}")))?;
        let api_key = match (self.mode, self.api_key.as_deref()) {
            (Mode::ByHash, _) => None,
            (_, Some(k)) if !k.is_empty() => Some(k),
            _ => return Err(FetchError::InvalidSpec("an api key is required for page-url and cid lookups".into())),
        };
        if self.key.is_empty() {
            return Err(FetchError::InvalidSpec("empty key".into()));
        }
        let base = url.path().trim_end_matches('/').to_string();
        match self.mode {
            Mode::ByHash => {
                url.path_segments_mut()
                    .map_err(|_| FetchError::InvalidSpec("endpoint cannot be a base".into()))?
                    .pop_if_empty()
                    .push(&self.key);
            }
            Mode::ByCid => {
                url.path_segments_mut()
                    .map_err(|_| FetchError::InvalidSpec("endpoint cannot be a base".into()))?
                    .pop_if_empty()
                    .extend(["cid", &self.key]);
            }
            // Encoded exactly as the store keys it, so the server sees the same bytes.
            Mode::ByPageUrl => {
                let enc = url_retrieval_key(&self.key).map_err(|e| FetchError::InvalidSpec(e.to_string()))?;
                url.set_path(&format!("{base}/url/{enc}"));
            }
        }
        if let Some(k) = api_key {
            url.query_pairs_mut().clear().append_pair("key", k);
        }
        Ok(url.to_string())
    }
}

fn client() -> reqwest::blocking::Client {
    reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(30))
        .build()
        .expect("http client builds")
}

/// The annotation exactly as served.
pub fn fetch_annotation(spec: &InjectionSpec) -> Result<Vec<u8>, FetchError> {
    let route = spec.route()?;
    let resp = client().get(&route).send().map_err(|e| FetchError::NetworkError(e.to_string()))?;
    let status = resp.status().as_u16();
    let body = resp.bytes().map_err(|e| FetchError::NetworkError(e.to_string()))?;
    match status {
        200..=299 => Ok(body.to_vec()),
        404 => Err(FetchError::NotFound),
        401 | 403 => Err(FetchError::Unauthorized(String::from_utf8_lossy(&body).into_owned())),
        s => Err(FetchError::NetworkError(format!("HTTP {s}: {}", String::from_utf8_lossy(&body)))),
    }
}

/// On-disk cache keyed by the resolved route.
#[derive(Debug, Clone)]
pub struct Cache {
    pub dir: PathBuf,
    pub ttl: Duration,
}

impl Cache {
    fn path(&self, route: &str) -> PathBuf {
        self.dir.join(format!("{}.json", hex::encode(Sha256::digest(route.as_bytes()))))
    }

    fn fresh(&self, path: &Path) -> Option<Vec<u8>> {
        let modified = std::fs::metadata(path).and_then(|m| m.modified()).ok()?;
        let age = SystemTime::now().duration_since(modified).unwrap_or_default();
        if age > self.ttl {
            return None;
        }
        std::fs::read(path).ok()
    }

    pub fn fetch(&self, spec: &InjectionSpec) -> Result<Vec<u8>, FetchError> {
        let path = self.path(&spec.route()?);
        if let Some(hit) = self.fresh(&path) {
            return Ok(hit);
        }
        let body = fetch_annotation(spec)?;
        // A cache that cannot be written only costs a refetch next time.
        if std::fs::create_dir_all(&self.dir).is_ok() {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, &body).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            }
        }
        Ok(body)
    }
}

/// Script body for an annotation: the bytes as given, with every `<` written as
/// `\u003c`. In valid JSON `<` only occurs inside strings, so the value is unchanged.
pub fn script_body(annotation: &[u8]) -> Result<Vec<u8>, InjectError> {
    serde_json::from_slice::<serde_json::Value>(annotation).map_err(|e| InjectError::InvalidAnnotation(e.to_string()))?;
    let mut out = Vec::with_capacity(annotation.len() + 16);
    for &b in annotation {
        if b == b'<' {
            out.extend_from_slice(br"\u003c");
        } else {
            out.push(b);
        }
    }
    Ok(out)
}

pub fn script_tag(annotation: &[u8]) -> Result<Vec<u8>, InjectError> {
    let body = script_body(annotation)?;
    let mut tag = Vec::with_capacity(body.len() + SCRIPT_OPEN.len() + SCRIPT_CLOSE.len());
    tag.extend_from_slice(SCRIPT_OPEN.as_bytes());
    tag.extend_from_slice(&body);
    tag.extend_from_slice(SCRIPT_CLOSE.as_bytes());
    Ok(tag)
}

fn starts_with_ci(hay: &[u8], at: usize, needle: &[u8]) -> bool {
    hay.len() >= at + needle.len() && hay[at..at + needle.len()].eq_ignore_ascii_case(needle)
}

fn find_ci(hay: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    (from..hay.len().saturating_sub(needle.len() - 1)).find(|&i| starts_with_ci(hay, i, needle))
}

/// `<name` followed by a delimiter, so `<head` does not match `<header`.
fn tag_at(html: &[u8], at: usize, name: &[u8]) -> bool {
    starts_with_ci(html, at, name) && matches!(html.get(at + name.len()), Some(b'>' | b'/' | b' ' | b'\t' | b'\n' | b'\r' | b'\x0c') | None)
}

/// Offset of the first `</head>` that is not inside a comment or the raw text
/// of a script or style element.
pub fn head_close(html: &[u8]) -> Option<usize> {
    let mut i = 0;
    while i < html.len() {
        if html[i] != b'<' {
            i += 1;
            continue;
        }
        if html[i..].starts_with(b"<!--") {
            i = find_ci(html, i + 4, b"-->").map_or(html.len(), |e| e + 3);
        } else if tag_at(html, i, b"</head") {
            return Some(i);
        } else if let Some(name) = [&b"<script"[..], b"<style"].into_iter().find(|n| tag_at(html, i, n)) {
            let close = [b"</".as_slice(), &name[1..]].concat();
            i = find_ci(html, i + name.len(), &close).map_or(html.len(), |e| e + close.len());
        } else {
            i += 1;
        }
    }
    None
}

/// Bodies of all `<script type="application/ld+json">` elements written in the
/// form `inject` produces, outside comments.
pub fn extract(html: &[u8]) -> Vec<&[u8]> {
    let open = SCRIPT_OPEN.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < html.len() {
        if html[i] != b'<' {
            i += 1;
        } else if html[i..].starts_with(b"<!--") {
            i = find_ci(html, i + 4, b"-->").map_or(html.len(), |e| e + 3);
        } else if starts_with_ci(html, i, open) {
            let body_start = i + open.len();
            let Some(end) = find_ci(html, body_start, SCRIPT_CLOSE.as_bytes()) else { break };
            out.push(&html[body_start..end]);
            i = end + SCRIPT_CLOSE.len();
        } else {
            i += 1;
        }
    }
    out
}

fn digest(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

/// Inserts the annotation right before `</head>`. A page that already carries
/// a script with the same body is returned unchanged.
pub fn inject(html: &[u8], annotation: &[u8]) -> Result<Vec<u8>, InjectError> {
    let body = script_body(annotation)?;
    let wanted = digest(&body);
    if extract(html).into_iter().any(|b| digest(b) == wanted) {
        return Ok(html.to_vec());
    }
    let at = head_close(html).ok_or(InjectError::NoHeadElement)?;
    let tag = script_tag(annotation)?;
    let mut out = Vec::with_capacity(html.len() + tag.len());
    out.extend_from_slice(&html[..at]);
    out.extend_from_slice(&tag);
    out.extend_from_slice(&html[at..]);
    Ok(out)
}
