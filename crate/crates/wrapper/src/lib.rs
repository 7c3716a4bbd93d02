//! Extension framework: adapters pull an external source, map its records to
//! annotation documents, validate them against the adapter's domain
//! specification and push them to the platform with a custom identifier, so
//! that re-runs replace instead of duplicate.

pub mod adapter;
pub mod adapters;
pub mod cid;
pub mod model;
pub mod platform;
pub mod run;
pub mod scheduler;

pub use adapter::{Adapter, AdapterRegistry, Config, FetchError, MapError};
pub use cid::{make_cid, parse_cid, CidError};
pub use model::{AdapterDescriptor, ExtensionActivation, Failure, PlatformTarget, RunReport, SourceRecord};
pub use platform::{HttpPlatform, Platform, PushError, PushOutcome};
pub use run::{run_extension, RunError};
pub use scheduler::Scheduler;
