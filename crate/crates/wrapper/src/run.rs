#[cfg(feature = "parallel")]
use rayon::prelude::*;
use semantify_core::{validate_against_ds, VocabularyGraph};

use crate::adapter::{check_config, Adapter, FetchError, MapError};
use crate::cid::make_cid;
use crate::model::{ExtensionActivation, Failure, RunReport, SourceRecord, MIN_FREQUENCY_SECS};
use crate::platform::{Platform, PushOutcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("source unreachable: {0}")]
    SourceUnreachable(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

impl From<FetchError> for RunError {
    fn from(e: FetchError) -> Self {
        match e {
            FetchError::SourceUnreachable(m) => RunError::SourceUnreachable(m),
            FetchError::ConfigInvalid(m) => RunError::ConfigInvalid(m),
        }
    }
}

enum Outcome {
    Created,
    Replaced,
    Skipped(String),
    Failed(String),
}

fn process(record: &SourceRecord, adapter: &dyn Adapter, platform: &dyn Platform, g: &VocabularyGraph) -> Outcome {
    let doc = match adapter.map(record) {
        Ok(doc) => doc,
        Err(MapError::Unmappable(reason)) => return Outcome::Skipped(reason),
        Err(MapError::Unexpected(reason)) => return Outcome::Failed(reason),
    };
    let report = validate_against_ds(&doc, adapter.domain_spec(), g);
    if !report.ok {
        let first = &report.violations[0];
        return Outcome::Failed(format!("ValidationFailed: {} {:?}", first.path, first.code));
    }
    let cid = match make_cid(&record.source_id, &record.language) {
        Ok(cid) => cid,
        Err(e) => return Outcome::Failed(format!("InvalidCid: {e}")),
    };
    match platform.push(&doc, &cid) {
        Ok(PushOutcome::Created(_)) => Outcome::Created,
        Ok(PushOutcome::Replaced(_)) => Outcome::Replaced,
        Err(e) => Outcome::Failed(format!("PushFailed: {e}")),
    }
}

pub fn check_activation(activation: &ExtensionActivation, adapter: &dyn Adapter) -> Result<(), RunError> {
    if activation.adapter_id != adapter.descriptor().adapter_id {
        return Err(RunError::ConfigInvalid(format!(
            "activation is for {}, not {}",
            activation.adapter_id,
            adapter.descriptor().adapter_id
        )));
    }
    if activation.frequency_secs < MIN_FREQUENCY_SECS {
        return Err(RunError::ConfigInvalid(format!("frequency must be at least {MIN_FREQUENCY_SECS} s")));
    }
    Ok(check_config(adapter.descriptor(), &activation.config)?)
}

/// Fetches, maps, validates and pushes every record of one activation.
/// Nothing is pushed when the source cannot be fetched.
pub fn run_extension(
    activation: &ExtensionActivation,
    adapter: &dyn Adapter,
    platform: &dyn Platform,
    g: &VocabularyGraph,
) -> Result<RunReport, RunError> {
    check_activation(activation, adapter)?;
    let records = adapter.fetch(&activation.config)?;
    #[cfg(feature = "parallel")]
    let outcomes: Vec<Outcome> = records.par_iter().map(|r| process(r, adapter, platform, g)).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Outcome> = records.iter().map(|r| process(r, adapter, platform, g)).collect();

    let mut report = RunReport {
        fetched: records.len() as u64,
        ..RunReport::default()
    };
    for (record, outcome) in records.iter().zip(outcomes) {
        let failure = |reason| Failure {
            source_id: record.source_id.clone(),
            reason,
        };
        match outcome {
            Outcome::Created => {
                report.mapped += 1;
                report.pushed_created += 1;
            }
            Outcome::Replaced => {
                report.mapped += 1;
                report.pushed_replaced += 1;
            }
            Outcome::Skipped(reason) => {
                tracing::info!(source_id = %record.source_id, %reason, "record skipped");
                report.skipped += 1;
                report.failures.push(failure(reason));
            }
            Outcome::Failed(reason) => {
                tracing::warn!(source_id = %record.source_id, %reason, "record failed");
                report.failed += 1;
                report.failures.push(failure(reason));
            }
        }
    }
    debug_assert!(report.is_consistent());
    Ok(report)
}
