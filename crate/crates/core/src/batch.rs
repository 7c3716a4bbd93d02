//! Batch operations over many documents.
//!
//! With the `parallel` feature (default) the unsuffixed functions run on the
//! rayon pool; the `_sequential` variants are always available and are what
//! the benches compare against.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde_json::Value;

use crate::annotation::{parse_annotation, parse_value, AnnotationDocument, ParseError};
use crate::domainspec::DomainSpecification;
use crate::validate::{validate_against_ds, ValidationReport};
use crate::vocab::VocabularyGraph;

pub type ParseResult = Result<AnnotationDocument, ParseError>;

pub fn parse_texts_sequential<S: AsRef<str>>(inputs: &[S]) -> Vec<ParseResult> {
    inputs.iter().map(|s| parse_annotation(s.as_ref())).collect()
}

pub fn parse_values_sequential(values: Vec<Value>) -> Vec<ParseResult> {
    values.into_iter().map(parse_value).collect()
}

pub fn total_statements_sequential(docs: &[AnnotationDocument]) -> u64 {
    docs.iter().map(AnnotationDocument::statement_count).sum()
}

pub fn validate_all_sequential(docs: &[AnnotationDocument], ds: &DomainSpecification, g: &VocabularyGraph) -> Vec<ValidationReport> {
    docs.iter().map(|d| validate_against_ds(d, ds, g)).collect()
}

#[cfg(feature = "parallel")]
pub fn parse_texts<S: AsRef<str> + Sync>(inputs: &[S]) -> Vec<ParseResult> {
    inputs.par_iter().map(|s| parse_annotation(s.as_ref())).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn parse_texts<S: AsRef<str> + Sync>(inputs: &[S]) -> Vec<ParseResult> {
    parse_texts_sequential(inputs)
}

/// Parses the elements of a bulk payload, preserving order.
#[cfg(feature = "parallel")]
pub fn parse_values(values: Vec<Value>) -> Vec<ParseResult> {
    values.into_par_iter().map(parse_value).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn parse_values(values: Vec<Value>) -> Vec<ParseResult> {
    parse_values_sequential(values)
}

#[cfg(feature = "parallel")]
pub fn total_statements(docs: &[AnnotationDocument]) -> u64 {
    docs.par_iter().map(AnnotationDocument::statement_count).sum()
}

#[cfg(not(feature = "parallel"))]
pub fn total_statements(docs: &[AnnotationDocument]) -> u64 {
    total_statements_sequential(docs)
}

#[cfg(feature = "parallel")]
pub fn validate_all(docs: &[AnnotationDocument], ds: &DomainSpecification, g: &VocabularyGraph) -> Vec<ValidationReport> {
    docs.par_iter().map(|d| validate_against_ds(d, ds, g)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn validate_all(docs: &[AnnotationDocument], ds: &DomainSpecification, g: &VocabularyGraph) -> Vec<ValidationReport> {
    validate_all_sequential(docs, ds, g)
}
