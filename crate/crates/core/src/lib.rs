//! Core of the annotation platform: the pinned schema.org vocabulary, domain
//! specifications, the restricted JSON-LD annotation profile with validation,
//! and the document store behind the REST API.

pub mod annotation;
pub mod batch;
pub mod domainspec;
pub mod generate;
pub mod ids;
pub mod store;
pub mod validate;
pub mod vocab;

pub use annotation::{count_statements, parse_annotation, url_retrieval_key, AnnotationDocument, ParseError};
pub use domainspec::{derive_form_schema, DomainSpecification, DsError, DsId, FormSchema};
pub use store::{Counters, Store, StoreError, StoredAnnotation, Website};
pub use validate::{validate_against_ds, ValidationReport, ViolationCode};
pub use vocab::{load_vocabulary, SharedVocabulary, VocabError, VocabularyGraph};
