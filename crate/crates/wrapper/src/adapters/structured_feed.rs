//! Accommodation feed (JSON array) to LodgingBusiness documents.
//!
//! Feed record: `{id, lang, category, name, street, city, postalCode, lat, lon,
//! offers: [{name, price, currency}]}` plus optional `description`, `telephone`, `url`.

use std::collections::BTreeMap;

use semantify_core::annotation::{Item, Node, PropertyValue, DEFAULT_CONTEXT};
use semantify_core::domainspec::bundled_specs;
use semantify_core::{AnnotationDocument, DomainSpecification, VocabularyGraph};
use serde::Deserialize;
use serde_json::{Map, Number, Value};

use crate::adapter::{Adapter, Config, FetchError, MapError};
use crate::model::{AdapterDescriptor, ConfigKey, SourceRecord};

pub const ADAPTER_ID: &str = "structured_feed";
const ROOT_TYPE: &str = "LodgingBusiness";
const BUNDLED_TYPES: &str = include_str!("../../data/structured_feed_types.json");

/// Upstream category to the nearest vocabulary class.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct TypeTable {
    pub default: String,
    pub categories: BTreeMap<String, String>,
}

impl TypeTable {
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED_TYPES).expect("bundled type table parses")
    }

    /// Table entry, else the category itself if it is a LodgingBusiness, else the default.
    pub fn resolve(&self, category: Option<&str>, g: &VocabularyGraph) -> String {
        let fits = |t: &str| g.conforms_to(t, ROOT_TYPE);
        let Some(category) = category else {
            return self.default.clone();
        };
        match self.categories.get(category) {
            Some(t) if fits(t) => t.clone(),
            _ if fits(category) => category.to_string(),
            _ => self.default.clone(),
        }
    }
}

pub struct StructuredFeed {
    descriptor: AdapterDescriptor,
    spec: DomainSpecification,
    types: TypeTable,
    vocab: VocabularyGraph,
    http: reqwest::blocking::Client,
}

impl Default for StructuredFeed {
    fn default() -> Self {
        Self::new()
    }
}

impl StructuredFeed {
    pub fn new() -> Self {
        Self::with_types(TypeTable::bundled())
    }

    pub fn with_types(types: TypeTable) -> Self {
        StructuredFeed {
            descriptor: AdapterDescriptor {
                adapter_id: ADAPTER_ID.into(),
                display_name: "Structured accommodation feed".into(),
                config_schema: vec![ConfigKey::required("feed")],
                languages: vec!["de".into(), "en".into(), "it".into()],
            },
            spec: bundled_specs()
                .into_iter()
                .find(|d| d.ds_id.0 == "lodging-business")
                .expect("bundled lodging specification"),
            types,
            vocab: VocabularyGraph::bundled(),
            http: reqwest::blocking::Client::new(),
        }
    }

    fn read_feed(&self, location: &str) -> Result<String, FetchError> {
        if location.starts_with("http://") || location.starts_with("https://") {
            self.http
                .get(location)
                .send()
                .and_then(|r| r.error_for_status())
                .and_then(|r| r.text())
                .map_err(|e| FetchError::SourceUnreachable(e.to_string()))
        } else {
            std::fs::read_to_string(location).map_err(|e| FetchError::SourceUnreachable(format!("{location}: {e}")))
        }
    }
}

fn text<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a str> {
    obj.get(key).and_then(Value::as_str).map(str::trim).filter(|s| !s.is_empty())
}

/// Numbers, or strings that read as numbers ("12.50", "12,50").
fn number(v: Option<&Value>) -> Option<Number> {
    match v? {
        Value::Number(n) => Some(n.clone()),
        Value::String(s) => s.trim().replace(',', ".").parse::<f64>().ok().and_then(Number::from_f64),
        _ => None,
    }
}

fn offer(v: &Value) -> Option<Node> {
    let o = v.as_object()?;
    Some(
        Node::new("Offer")
            .with_text("name", text(o, "name")?)
            .with("price", PropertyValue::One(Item::Number(number(o.get("price"))?)))
            .with_text("priceCurrency", text(o, "currency")?),
    )
}

impl Adapter for StructuredFeed {
    fn descriptor(&self) -> &AdapterDescriptor {
        &self.descriptor
    }

    fn domain_spec(&self) -> &DomainSpecification {
        &self.spec
    }

    fn fetch(&self, config: &Config) -> Result<Vec<SourceRecord>, FetchError> {
        let location = config.get("feed").ok_or_else(|| FetchError::ConfigInvalid("missing feed".into()))?;
        let body = self.read_feed(location)?;
        let items: Vec<Value> = serde_json::from_str(&body).map_err(|e| FetchError::SourceUnreachable(format!("feed is not a JSON array: {e}")))?;
        Ok(items
            .into_iter()
            .enumerate()
            .map(|(i, payload)| SourceRecord {
                source_id: payload
                    .get("id")
                    .and_then(|v| match v {
                        Value::String(s) => Some(s.clone()),
                        Value::Number(n) => Some(n.to_string()),
                        _ => None,
                    })
                    .unwrap_or_else(|| format!("#{i}")),
                language: payload.get("lang").and_then(Value::as_str).unwrap_or("").to_string(),
                payload,
            })
            .collect())
    }

    fn map(&self, record: &SourceRecord) -> Result<AnnotationDocument, MapError> {
        let obj = record
            .payload
            .as_object()
            .ok_or_else(|| MapError::Unexpected("record is not an object".into()))?;
        let name = text(obj, "name").ok_or_else(|| MapError::Unmappable("MissingName".into()))?;
        let (street, city) = match (text(obj, "street"), text(obj, "city")) {
            (Some(s), Some(c)) => (s, c),
            _ => return Err(MapError::Unmappable("MissingAddress".into())),
        };
        let type_name = self.types.resolve(text(obj, "category"), &self.vocab);
        let mut node = Node::new(type_name).with_text("name", name);

        let mut address = Node::new("PostalAddress").with_text("streetAddress", street).with_text("addressLocality", city);
        if let Some(pc) = obj.get("postalCode").and_then(|v| match v {
            Value::String(s) if !s.trim().is_empty() => Some(s.trim().to_string()),
            Value::Number(n) => Some(n.to_string()),
            _ => None,
        }) {
            address = address.with_text("postalCode", pc);
        }
        node = node.with_node("address", address);

        match (number(obj.get("lat")), number(obj.get("lon"))) {
            (Some(lat), Some(lon)) => {
                let geo = Node::new("GeoCoordinates")
                    .with("latitude", PropertyValue::One(Item::Number(lat)))
                    .with("longitude", PropertyValue::One(Item::Number(lon)));
                node = node.with_node("geo", geo);
            }
            (None, None) => {}
            _ => tracing::debug!(source_id = %record.source_id, "incomplete coordinates dropped"),
        }
        if let Some(desc) = text(obj, "description") {
            node = node.with_text("description", desc);
        }
        if let Some(tel) = text(obj, "telephone") {
            node = node.with("telephone", PropertyValue::Many(vec![Item::Text(tel.to_string())]));
        }
        if let Some(url) = text(obj, "url").filter(|u| semantify_core::annotation::is_absolute_http_url(u)) {
            node = node.with_text("url", url);
        }
        let offers: Vec<Item> = obj
            .get("offers")
            .and_then(Value::as_array)
            .map(|list| {
                list.iter()
                    .filter_map(|o| {
                        let mapped = offer(o);
                        if mapped.is_none() {
                            tracing::debug!(source_id = %record.source_id, "unusable offer dropped");
                        }
                        mapped
                    })
                    .map(|n| Item::Node(Box::new(n)))
                    .collect()
            })
            .unwrap_or_default();
        if !offers.is_empty() {
            node = node.with("makesOffer", PropertyValue::Many(offers));
        }
        AnnotationDocument::from_node(DEFAULT_CONTEXT, node).map_err(|e| MapError::Unexpected(e.to_string()))
    }
}
