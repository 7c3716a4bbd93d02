//! Custom identifiers of the form `sourceId-lang`.
//!
//! The language is always the part after the last hyphen, so source ids may
//! contain hyphens themselves.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CidError {
    #[error("source id is empty")]
    EmptySourceId,
    #[error("language must be a two-letter lowercase ISO 639-1 code, got {0:?}")]
    InvalidLanguage(String),
    #[error("not a cid: {0:?}")]
    Malformed(String),
}

pub fn is_language_code(s: &str) -> bool {
    s.len() == 2 && s.bytes().all(|b| b.is_ascii_lowercase())
}

pub fn make_cid(source_id: &str, language: &str) -> Result<String, CidError> {
    if source_id.is_empty() {
        return Err(CidError::EmptySourceId);
    }
    if !is_language_code(language) {
        return Err(CidError::InvalidLanguage(language.to_string()));
    }
    Ok(format!("{source_id}-{language}"))
}

pub fn parse_cid(cid: &str) -> Result<(&str, &str), CidError> {
    let (source_id, language) = cid.rsplit_once('-').ok_or_else(|| CidError::Malformed(cid.to_string()))?;
    if source_id.is_empty() {
        return Err(CidError::EmptySourceId);
    }
    if !is_language_code(language) {
        return Err(CidError::InvalidLanguage(language.to_string()));
    }
    Ok((source_id, language))
}
