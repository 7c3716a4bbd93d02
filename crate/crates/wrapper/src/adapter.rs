use std::collections::BTreeMap;
use std::sync::Arc;

use semantify_core::{AnnotationDocument, DomainSpecification};

use crate::model::{AdapterDescriptor, SourceRecord};

pub type Config = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FetchError {
    #[error("source unreachable: {0}")]
    SourceUnreachable(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    /// Content the adapter cannot express; the record is skipped.
    #[error("{0}")]
    Unmappable(String),
    /// Anything else; the record is counted as failed.
    #[error("{0}")]
    Unexpected(String),
}

/// One external source. `map` must be pure per record.
pub trait Adapter: Send + Sync {
    fn descriptor(&self) -> &AdapterDescriptor;
    fn domain_spec(&self) -> &DomainSpecification;
    fn fetch(&self, config: &Config) -> Result<Vec<SourceRecord>, FetchError>;
    fn map(&self, record: &SourceRecord) -> Result<AnnotationDocument, MapError>;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("adapter id already registered: {0}")]
pub struct DuplicateAdapter(pub String);

#[derive(Default, Clone)]
pub struct AdapterRegistry {
    adapters: BTreeMap<String, Arc<dyn Adapter>>,
}

impl AdapterRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// The two bundled adapters.
    pub fn with_builtin() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(crate::adapters::StructuredFeed::new())).expect("fresh registry");
        r.register(Arc::new(crate::adapters::PageScrape::new())).expect("fresh registry");
        r
    }

    pub fn register(&mut self, adapter: Arc<dyn Adapter>) -> Result<(), DuplicateAdapter> {
        let id = adapter.descriptor().adapter_id.clone();
        if self.adapters.contains_key(&id) {
            return Err(DuplicateAdapter(id));
        }
        self.adapters.insert(id, adapter);
        Ok(())
    }

    pub fn get(&self, adapter_id: &str) -> Option<Arc<dyn Adapter>> {
        self.adapters.get(adapter_id).cloned()
    }

    pub fn descriptors(&self) -> Vec<&AdapterDescriptor> {
        self.adapters.values().map(|a| a.descriptor()).collect()
    }
}

/// Checks required keys and rejects keys the schema does not know.
pub fn check_config(descriptor: &AdapterDescriptor, config: &Config) -> Result<(), FetchError> {
    for k in &descriptor.config_schema {
        if k.required && config.get(&k.key).map_or(true, |v| v.trim().is_empty()) {
            return Err(FetchError::ConfigInvalid(format!("missing required key {}", k.key)));
        }
    }
    for key in config.keys() {
        if !descriptor.config_schema.iter().any(|k| &k.key == key) {
            return Err(FetchError::ConfigInvalid(format!("unknown key {key}")));
        }
    }
    Ok(())
}
