//! Structural validation of annotation documents against domain specifications.

use std::collections::BTreeSet;

use chrono::{DateTime, NaiveDate, NaiveDateTime, NaiveTime};
use serde::{Deserialize, Serialize};

use crate::annotation::{is_absolute_http_url, AnnotationDocument, Item, Node};
use crate::domainspec::{DomainSpecification, Multiplicity, NestedType, PropertyConstraint, RangeConstraint};
use crate::vocab::{Primitive, VocabularyGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ViolationCode {
    MissingRequired,
    UnknownProperty,
    WrongRangeKind,
    WrongNestedType,
    CardinalityExceeded,
    TypeMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub code: ViolationCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn success() -> Self {
        ValidationReport {
            ok: true,
            violations: Vec::new(),
        }
    }

    pub fn keys(&self) -> BTreeSet<(String, ViolationCode)> {
        self.violations.iter().map(|v| (v.path.clone(), v.code)).collect()
    }
}

/// Does `item` satisfy the lexical rules of primitive kind `kind`? Strings are never coerced.
pub fn scalar_matches(kind: Primitive, item: &Item) -> bool {
    match (kind, item) {
        (Primitive::Text, Item::Text(_)) => true,
        (Primitive::Url, Item::Text(s)) => is_absolute_http_url(s),
        (Primitive::Number | Primitive::Float, Item::Number(_)) => true,
        (Primitive::Integer, Item::Number(n)) => {
            n.is_i64() || n.is_u64() || n.as_f64().is_some_and(|f| f.is_finite() && f.fract() == 0.0)
        }
        (Primitive::Boolean, Item::Boolean(_)) => true,
        (Primitive::Date, Item::Text(s)) => is_iso_date(s),
        (Primitive::DateTime, Item::Text(s)) => is_iso_datetime(s),
        (Primitive::Time, Item::Text(s)) => is_iso_time(s),
        _ => false,
    }
}

pub fn is_iso_date(s: &str) -> bool {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
}

pub fn is_iso_datetime(s: &str) -> bool {
    DateTime::parse_from_rfc3339(s).is_ok()
        || NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f").is_ok()
        || NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M").is_ok()
}

pub fn is_iso_time(s: &str) -> bool {
    let local = s
        .strip_suffix('Z')
        .or_else(|| {
            // trailing +hh:mm / -hh:mm offset
            let cut = s.len().checked_sub(6)?;
            let (head, tail) = s.split_at(cut);
            let b = tail.as_bytes();
            ((b[0] == b'+' || b[0] == b'-') && b[3] == b':').then_some(head)
        })
        .unwrap_or(s);
    NaiveTime::parse_from_str(local, "%H:%M:%S%.f").is_ok() || NaiveTime::parse_from_str(local, "%H:%M").is_ok()
}

struct Collector {
    seen: BTreeSet<(String, ViolationCode)>,
    violations: Vec<Violation>,
}

impl Collector {
    fn push(&mut self, path: &str, code: ViolationCode, message: String) {
        if self.seen.insert((path.to_string(), code)) {
            self.violations.push(Violation {
                path: path.to_string(),
                code,
                message,
            });
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Validates `doc` against `ds`. All violations are reported, deduplicated by (path, code).
pub fn validate_against_ds(doc: &AnnotationDocument, ds: &DomainSpecification, g: &VocabularyGraph) -> ValidationReport {
    validate_node(doc.body(), &ds.target_type, &ds.constraints, g)
}

/// Validates a bare tree; `expected_type` is the type the root must conform to.
pub fn validate_node(
    node: &Node,
    expected_type: &str,
    constraints: &[PropertyConstraint],
    g: &VocabularyGraph,
) -> ValidationReport {
    let mut out = Collector {
        seen: BTreeSet::new(),
        violations: Vec::new(),
    };
    if !g.conforms_to(&node.type_name, expected_type) {
        out.push(
            "@type",
            ViolationCode::TypeMismatch,
            format!("type {} is not a {}", node.type_name, expected_type),
        );
    }
    check_level(node, constraints, "", g, &mut out);
    ValidationReport {
        ok: out.violations.is_empty(),
        violations: out.violations,
    }
}

fn check_level(node: &Node, constraints: &[PropertyConstraint], path: &str, g: &VocabularyGraph, out: &mut Collector) {
    for c in constraints {
        let n = node.properties.get(&c.property).map_or(0, |v| v.items().len());
        if c.required && n == 0 {
            out.push(
                &join(path, &c.property),
                ViolationCode::MissingRequired,
                format!("required property {} is missing", c.property),
            );
        }
    }
    for c in constraints {
        let n = node.properties.get(&c.property).map_or(0, |v| v.items().len());
        if c.multiplicity == Multiplicity::Single && n > 1 {
            out.push(
                &join(path, &c.property),
                ViolationCode::CardinalityExceeded,
                format!("{} allows a single value, found {n}", c.property),
            );
        }
    }
    for key in node.properties.keys() {
        if !constraints.iter().any(|c| &c.property == key) {
            out.push(
                &join(path, key),
                ViolationCode::UnknownProperty,
                format!("property {key} is not part of the domain specification"),
            );
        }
    }
    for c in constraints {
        let Some(value) = node.properties.get(&c.property) else {
            continue;
        };
        let base = join(path, &c.property);
        for (i, item) in value.items().iter().enumerate() {
            let here = if value.is_array() { format!("{base}[{i}]") } else { base.clone() };
            check_item(item, &c.allowed_ranges, &here, g, out);
        }
    }
}

fn check_item(item: &Item, ranges: &[RangeConstraint], path: &str, g: &VocabularyGraph, out: &mut Collector) {
    match item {
        Item::Node(child) => {
            let nested: Vec<&NestedType> = ranges
                .iter()
                .filter_map(|r| match r {
                    RangeConstraint::Nested { nested_type } => Some(nested_type),
                    RangeConstraint::Primitive { .. } => None,
                })
                .collect();
            if nested.is_empty() {
                out.push(path, ViolationCode::WrongRangeKind, "expected a scalar value, found an object".into());
                return;
            }
            match nested.iter().find(|n| g.conforms_to(&child.type_name, &n.type_name)) {
                Some(target) => check_level(child, &target.constraints, path, g, out),
                None => {
                    let allowed: Vec<&str> = nested.iter().map(|n| n.type_name.as_str()).collect();
                    out.push(
                        path,
                        ViolationCode::WrongNestedType,
                        format!("type {} is not one of {}", child.type_name, allowed.join(", ")),
                    );
                }
            }
        }
        scalar => {
            let kinds: Vec<Primitive> = ranges
                .iter()
                .filter_map(|r| match r {
                    RangeConstraint::Primitive { primitive } => Some(*primitive),
                    RangeConstraint::Nested { .. } => None,
                })
                .collect();
            if kinds.is_empty() {
                out.push(path, ViolationCode::WrongRangeKind, "expected a nested object, found a scalar".into());
            } else if !kinds.iter().any(|k| scalar_matches(*k, scalar)) {
                let allowed: Vec<&str> = kinds.iter().map(|k| k.token()).collect();
                out.push(
                    path,
                    ViolationCode::TypeMismatch,
                    format!("value does not match {}", allowed.join(" or ")),
                );
            }
        }
    }
}

/// Extension point for rule-based semantic checks layered on top of a DS.
/// No rules are defined, so every document passes.
pub fn semantic_validate(_doc: &AnnotationDocument, _ds: &DomainSpecification) -> ValidationReport {
    ValidationReport::success()
}
