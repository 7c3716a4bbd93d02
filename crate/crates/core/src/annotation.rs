//! The restricted JSON-LD profile used for stored annotations.
//!
//! A document is a single root object with a string `@context` naming
//! schema.org, one `@type` string per node, and property values that are
//! scalars, nested typed objects, or arrays of those. Everything else that
//! JSON-LD allows (`@graph`, `@reverse`, value objects, language maps...) is
//! rejected at parse time.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde_json::{Map, Number, Value};

/// `@context` spellings accepted for the schema.org vocabulary.
pub const SCHEMA_ORG_CONTEXTS: [&str; 3] = ["http://schema.org", "https://schema.org", "http://schema.org/"];

pub const DEFAULT_CONTEXT: &str = "http://schema.org";

/// Everything outside the RFC 3986 unreserved set.
const URL_KEY_ENCODE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub type_name: String,
    pub id: Option<String>,
    pub properties: BTreeMap<String, PropertyValue>,
}

/// A property value keeps its array-ness so that serialization round trips.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertyValue {
    One(Item),
    Many(Vec<Item>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Text(String),
    Number(Number),
    Boolean(bool),
    Node(Box<Node>),
}

impl PropertyValue {
    pub fn items(&self) -> &[Item] {
        match self {
            PropertyValue::One(item) => std::slice::from_ref(item),
            PropertyValue::Many(items) => items,
        }
    }

    pub fn is_array(&self) -> bool {
        matches!(self, PropertyValue::Many(_))
    }
}

impl Node {
    pub fn new(type_name: impl Into<String>) -> Self {
        Node {
            type_name: type_name.into(),
            id: None,
            properties: BTreeMap::new(),
        }
    }

    pub fn with(mut self, property: impl Into<String>, value: PropertyValue) -> Self {
        self.properties.insert(property.into(), value);
        self
    }

    pub fn with_text(self, property: impl Into<String>, text: impl Into<String>) -> Self {
        self.with(property, PropertyValue::One(Item::Text(text.into())))
    }

    pub fn with_node(self, property: impl Into<String>, node: Node) -> Self {
        self.with(property, PropertyValue::One(Item::Node(Box::new(node))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("body is not valid JSON: {0}")]
    NotJson(String),
    #[error("annotation root must be a JSON object")]
    NotAnObject,
    #[error("missing @context")]
    MissingContext,
    #[error("@context must be one of the schema.org context strings, got {0}")]
    WrongContext(String),
    #[error("missing @type at {0}")]
    MissingType(String),
    #[error("@type must be a single non-empty string at {0}")]
    InvalidType(String),
    #[error("unsupported keyword {keyword} at {path}")]
    UnsupportedKeyword { keyword: String, path: String },
    #[error("invalid value at {path}: {reason}")]
    InvalidValue { path: String, reason: &'static str },
    #[error("document is empty")]
    EmptyDocument,
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::NotJson(_) => "NotJson",
            ParseError::NotAnObject => "NotAnObject",
            ParseError::MissingContext => "MissingContext",
            ParseError::WrongContext(_) => "WrongContext",
            ParseError::MissingType(_) => "MissingType",
            ParseError::InvalidType(_) => "InvalidType",
            ParseError::UnsupportedKeyword { .. } => "UnsupportedKeyword",
            ParseError::InvalidValue { .. } => "InvalidValue",
            ParseError::EmptyDocument => "EmptyDocument",
        }
    }
}

/// A parsed, profile-conforming annotation plus the metadata derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationDocument {
    context: String,
    body: Node,
    canonical: String,
    statement_count: u64,
    url_value: Option<String>,
}

impl AnnotationDocument {
    /// Builds a document from an already-valid tree (generators, mappers).
    pub fn from_node(context: &str, body: Node) -> Result<Self, ParseError> {
        if !SCHEMA_ORG_CONTEXTS.contains(&context) {
            return Err(ParseError::WrongContext(context.to_string()));
        }
        check_node_tree(&body, "")?;
        Ok(Self::assemble(context.to_string(), body))
    }

    fn assemble(context: String, body: Node) -> Self {
        let mut canonical = String::new();
        write_node(&mut canonical, &body, Some(&context));
        let statement_count = count_statements(&body);
        let url_value = match body.properties.get("url") {
            Some(PropertyValue::One(Item::Text(url))) => Some(url.clone()),
            _ => None,
        };
        AnnotationDocument {
            context,
            body,
            canonical,
            statement_count,
            url_value,
        }
    }

    pub fn context(&self) -> &str {
        &self.context
    }

    pub fn body(&self) -> &Node {
        &self.body
    }

    pub fn root_type(&self) -> &str {
        &self.body.type_name
    }

    /// Canonical serialization: sorted keys with `@context`, `@type`, `@id` first, no whitespace.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn statement_count(&self) -> u64 {
        self.statement_count
    }

    pub fn url_value(&self) -> Option<&str> {
        self.url_value.as_deref()
    }

    pub fn to_json(&self) -> Value {
        serde_json::from_str(&self.canonical).expect("canonical form is JSON")
    }
}

pub fn parse_annotation(text: &str) -> Result<AnnotationDocument, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::EmptyDocument);
    }
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::NotJson(e.to_string()))?;
    parse_value(value)
}

/// Parses an already-decoded JSON value (bulk upload elements).
pub fn parse_value(value: Value) -> Result<AnnotationDocument, ParseError> {
    let Value::Object(mut root) = value else {
        return Err(ParseError::NotAnObject);
    };
    if root.is_empty() {
        return Err(ParseError::EmptyDocument);
    }
    let context = match root.remove("@context") {
        None => return Err(ParseError::MissingContext),
        Some(Value::String(s)) if SCHEMA_ORG_CONTEXTS.contains(&s.as_str()) => s,
        Some(Value::String(s)) => return Err(ParseError::WrongContext(s)),
        Some(other) => return Err(ParseError::WrongContext(other.to_string())),
    };
    let body = parse_node(root, "")?;
    Ok(AnnotationDocument::assemble(context, body))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn type_path(path: &str) -> String {
    join(path, "@type")
}

fn parse_node(mut object: Map<String, Value>, path: &str) -> Result<Node, ParseError> {
    if let Some(keyword) = object
        .keys()
        .find(|k| k.starts_with('@') && *k != "@type" && *k != "@id")
    {
        return Err(ParseError::UnsupportedKeyword {
            keyword: keyword.clone(),
            path: join(path, keyword),
        });
    }
    let type_name = match object.remove("@type") {
        None => return Err(ParseError::MissingType(type_path(path))),
        Some(Value::String(t)) if !t.is_empty() => t,
        Some(_) => return Err(ParseError::InvalidType(type_path(path))),
    };
    let id = match object.remove("@id") {
        None => None,
        Some(Value::String(id)) => Some(id),
        Some(_) => {
            return Err(ParseError::InvalidValue {
                path: join(path, "@id"),
                reason: "@id must be a string",
            })
        }
    };
    let mut properties = BTreeMap::new();
    for (key, value) in object {
        let here = join(path, &key);
        if key.is_empty() {
            return Err(ParseError::InvalidValue {
                path: here,
                reason: "empty property name",
            });
        }
        let value = match value {
            Value::Array(elements) => {
                let items = elements
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| parse_item(v, &format!("{here}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                PropertyValue::Many(items)
            }
            other => PropertyValue::One(parse_item(other, &here)?),
        };
        properties.insert(key, value);
    }
    Ok(Node {
        type_name,
        id,
        properties,
    })
}

fn parse_item(value: Value, path: &str) -> Result<Item, ParseError> {
    match value {
        Value::String(s) => Ok(Item::Text(s)),
        Value::Number(n) => Ok(Item::Number(n)),
        Value::Bool(b) => Ok(Item::Boolean(b)),
        Value::Null => Err(ParseError::InvalidValue {
            path: path.to_string(),
            reason: "null values are not allowed",
        }),
        Value::Array(_) => Err(ParseError::InvalidValue {
            path: path.to_string(),
            reason: "nested arrays are not allowed",
        }),
        Value::Object(object) => {
            if object.contains_key("@context") {
                return Err(ParseError::UnsupportedKeyword {
                    keyword: "@context".into(),
                    path: join(path, "@context"),
                });
            }
            Ok(Item::Node(Box::new(parse_node(object, path)?)))
        }
    }
}

fn check_node_tree(node: &Node, path: &str) -> Result<(), ParseError> {
    if node.type_name.is_empty() {
        return Err(ParseError::InvalidType(type_path(path)));
    }
    for (key, value) in &node.properties {
        let here = join(path, key);
        if key.starts_with('@') {
            return Err(ParseError::UnsupportedKeyword {
                keyword: key.clone(),
                path: here,
            });
        }
        for (i, item) in value.items().iter().enumerate() {
            if let Item::Node(child) = item {
                let child_path = if value.is_array() { format!("{here}[{i}]") } else { here.clone() };
                check_node_tree(child, &child_path)?;
            }
        }
    }
    Ok(())
}

/// Statement (triple) count: one for the node's type, one per scalar value,
/// and one link per nested node plus that node's own count.
pub fn count_statements(node: &Node) -> u64 {
    1 + node
        .properties
        .values()
        .flat_map(PropertyValue::items)
        .map(|item| match item {
            Item::Node(child) => 1 + count_statements(child),
            _ => 1,
        })
        .sum::<u64>()
}

fn write_json_string(out: &mut String, s: &str) {
    // serde_json's escaping is the reference for string literals.
    out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
}

fn write_node(out: &mut String, node: &Node, context: Option<&str>) {
    out.push('{');
    if let Some(context) = context {
        out.push_str("\"@context\":");
        write_json_string(out, context);
        out.push(',');
    }
    out.push_str("\"@type\":");
    write_json_string(out, &node.type_name);
    if let Some(id) = &node.id {
        out.push_str(",\"@id\":");
        write_json_string(out, id);
    }
    for (key, value) in &node.properties {
        out.push(',');
        write_json_string(out, key);
        out.push(':');
        match value {
            PropertyValue::One(item) => write_item(out, item),
            PropertyValue::Many(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_item(out, item);
                }
                out.push(']');
            }
        }
    }
    out.push('}');
}

fn write_item(out: &mut String, item: &Item) {
    match item {
        Item::Text(s) => write_json_string(out, s),
        Item::Number(n) => {
            let _ = write!(out, "{n}");
        }
        Item::Boolean(b) => out.push_str(if *b { "true" } else { "false" }),
        Item::Node(child) => write_node(out, child, None),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not an absolute http(s) URL: {0}")]
pub struct NotAbsoluteUrl(pub String);

/// `http://` or `https://` (scheme case-insensitive) followed by a non-empty authority.
pub fn is_absolute_http_url(s: &str) -> bool {
    let rest = if s.len() >= 7 && s[..7].eq_ignore_ascii_case("http://") {
        &s[7..]
    } else if s.len() >= 8 && s[..8].eq_ignore_ascii_case("https://") {
        &s[8..]
    } else {
        return false;
    };
    rest.chars()
        .next()
        .is_some_and(|c| !matches!(c, '/' | '?' | '#') && !c.is_whitespace())
}

/// Percent-encodes the exact URL string; no normalization of any kind.
pub fn url_retrieval_key(url: &str) -> Result<String, NotAbsoluteUrl> {
    if !is_absolute_http_url(url) {
        return Err(NotAbsoluteUrl(url.to_string()));
    }
    Ok(utf8_percent_encode(url, URL_KEY_ENCODE).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_hotel() {
        let doc = parse_annotation(r#"{"@context":"http://schema.org","@type":"Hotel","name":"Alp Inn"}"#).unwrap();
        assert_eq!(doc.statement_count(), 2);
        assert_eq!(doc.root_type(), "Hotel");
        assert_eq!(doc.url_value(), None);
    }

    #[test]
    fn nested_article_counts_link_and_nested_statements() {
        let doc = parse_annotation(
            r#"{"@context":"http://schema.org","@type":"Article","url":"https://ex.org/p1",
                "author":{"@type":"Person","name":"A"}}"#,
        )
        .unwrap();
        // type + url + author link + Person type + Person name
        assert_eq!(doc.statement_count(), 5);
        assert_eq!(doc.url_value(), Some("https://ex.org/p1"));
    }

    #[test]
    fn type_only_and_additivity() {
        assert_eq!(count_statements(&Node::new("Thing")), 1);
        let n = Node::new("Thing")
            .with_text("a", "1")
            .with_text("b", "2")
            .with_text("c", "3");
        assert_eq!(count_statements(&n), 4);
    }

    #[test]
    fn rejects_profile_exclusions() {
        let cases = [
            (r#"{"@context":"http://schema.org","@graph":[]}"#, "UnsupportedKeyword"),
            (r#"{"@context":"http://schema.org","@type":"Thing","@graph":[]}"#, "UnsupportedKeyword"),
            (r#"{"@context":"http://schema.org","@type":"Thing","@reverse":{}}"#, "UnsupportedKeyword"),
            (r#"{"@context":"http://schema.org","@type":"Thing","name":{"@value":"x"}}"#, "UnsupportedKeyword"),
            (r#"{"@context":"http://schema.org","@type":"Thing","name":{"x":"y"}}"#, "MissingType"),
            (r#"{"@context":"http://schema.org","@type":"Thing","name":{"@type":"Thing","@list":[]}}"#, "UnsupportedKeyword"),
            (r#"{"@context":"http://example.org","@type":"Thing"}"#, "WrongContext"),
            (r#"{"@context":{"@vocab":"http://schema.org/"},"@type":"Thing"}"#, "WrongContext"),
            (r#"{"@type":"Thing"}"#, "MissingContext"),
            (r#"{"@context":"http://schema.org","@type":["A","B"]}"#, "InvalidType"),
            (r#"{"@context":"http://schema.org","@type":"Thing","x":null}"#, "InvalidValue"),
            (r#"{"@context":"http://schema.org","@type":"Thing","x":[[1]]}"#, "InvalidValue"),
            (r#"[1]"#, "NotAnObject"),
            (r#"{"@context":"#, "NotJson"),
            ("  ", "EmptyDocument"),
            ("{}", "EmptyDocument"),
        ];
        for (text, code) in cases {
            let err = parse_annotation(text).unwrap_err();
            assert_eq!(err.code(), code, "{text}: {err}");
        }
    }

    #[test]
    fn graph_at_root_is_unsupported_keyword() {
        let err = parse_annotation(r#"{"@context":"https://schema.org","@type":"Thing","@graph":[{"@type":"Thing"}]}"#)
            .unwrap_err();
        assert_eq!(
            err,
            ParseError::UnsupportedKeyword {
                keyword: "@graph".into(),
                path: "@graph".into()
            }
        );
    }

    #[test]
    fn canonical_key_order() {
        let doc = parse_annotation(
            r#"{ "name": "x", "@id": "urn:1", "@type": "Thing", "@context": "https://schema.org",
                 "Zeta": 1, "alpha": [true, {"name":"n","@type":"Thing"}] }"#,
        )
        .unwrap();
        assert_eq!(
            doc.canonical(),
            r#"{"@context":"https://schema.org","@type":"Thing","@id":"urn:1","Zeta":1,"alpha":[true,{"@type":"Thing","name":"n"}],"name":"x"}"#
        );
        let again = parse_annotation(doc.canonical()).unwrap();
        assert_eq!(again.canonical(), doc.canonical());
        assert_eq!(again, doc);
    }

    #[test]
    fn id_counts_nothing() {
        let doc = parse_annotation(r#"{"@context":"http://schema.org","@type":"Thing","@id":"urn:x"}"#).unwrap();
        assert_eq!(doc.statement_count(), 1);
    }

    #[test]
    fn url_value_needs_single_string() {
        let doc = parse_annotation(r#"{"@context":"http://schema.org","@type":"Thing","url":["https://a.b"]}"#).unwrap();
        assert_eq!(doc.url_value(), None);
    }

    #[test]
    fn url_keys() {
        assert_eq!(url_retrieval_key("https://example.com/page").unwrap(), "https%3A%2F%2Fexample.com%2Fpage");
        assert_eq!(url_retrieval_key("https://ex.org/a b").unwrap(), "https%3A%2F%2Fex.org%2Fa%20b");
        assert_eq!(url_retrieval_key("http://x.y/~a-b_c.d").unwrap(), "http%3A%2F%2Fx.y%2F~a-b_c.d");
        assert!(url_retrieval_key("ftp://x").is_err());
        assert!(url_retrieval_key("/relative").is_err());
        assert!(url_retrieval_key("https://").is_err());
    }
}
