use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigKey {
    pub key: String,
    pub required: bool,
    /// Secret values are never logged or echoed.
    pub secret: bool,
}

impl ConfigKey {
    pub fn required(key: &str) -> Self {
        ConfigKey {
            key: key.into(),
            required: true,
            secret: false,
        }
    }

    pub fn optional(key: &str) -> Self {
        ConfigKey {
            key: key.into(),
            required: false,
            secret: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AdapterDescriptor {
    pub adapter_id: String,
    pub display_name: String,
    pub config_schema: Vec<ConfigKey>,
    pub languages: Vec<String>,
}

/// Where the runner pushes to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlatformTarget {
    pub endpoint: String,
    pub api_key: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtensionActivation {
    pub website_id: String,
    pub adapter_id: String,
    #[serde(default)]
    pub config: BTreeMap<String, String>,
    pub frequency_secs: u64,
    #[serde(default)]
    pub last_run_at: Option<DateTime<Utc>>,
    #[serde(default)]
    pub last_run_report: Option<RunReport>,
    pub platform: PlatformTarget,
}

pub const MIN_FREQUENCY_SECS: u64 = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceRecord {
    pub source_id: String,
    pub language: String,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Failure {
    pub source_id: String,
    pub reason: String,
}

/// `fetched = mapped + skipped + failed` and `mapped = pushed_created + pushed_replaced`.
/// A record counts as mapped only once its push succeeded; validation and push
/// failures are counted in `failed`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub fetched: u64,
    pub mapped: u64,
    pub pushed_created: u64,
    pub pushed_replaced: u64,
    pub skipped: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
}

impl RunReport {
    pub fn is_consistent(&self) -> bool {
        self.fetched == self.mapped + self.skipped + self.failed
            && self.mapped == self.pushed_created + self.pushed_replaced
            && self.failures.len() as u64 == self.skipped + self.failed
    }
}
