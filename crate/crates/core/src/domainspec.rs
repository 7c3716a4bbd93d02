//! Domain specifications: per-domain restrictions of the vocabulary that serve
//! as both the validation target and the template for editor forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::vocab::{Primitive, VocabularyGraph};

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DsId(pub String);

impl fmt::Display for DsId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DomainSpecification {
    #[serde(default)]
    pub ds_id: DsId,
    pub name: String,
    pub target_type: String,
    #[serde(default)]
    pub version: u64,
    pub constraints: Vec<PropertyConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Multiplicity {
    Single,
    Many,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyConstraint {
    pub property: String,
    pub required: bool,
    pub multiplicity: Multiplicity,
    #[serde(rename = "ranges")]
    pub allowed_ranges: Vec<RangeConstraint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RangeConstraint {
    #[serde(rename = "primitive")]
    Primitive { primitive: Primitive },
    #[serde(rename = "nestedType", rename_all = "camelCase")]
    Nested { nested_type: NestedType },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestedType {
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default)]
    pub constraints: Vec<PropertyConstraint>,
}

impl RangeConstraint {
    pub fn primitive(p: Primitive) -> Self {
        RangeConstraint::Primitive { primitive: p }
    }

    pub fn nested(type_name: impl Into<String>, constraints: Vec<PropertyConstraint>) -> Self {
        RangeConstraint::Nested {
            nested_type: NestedType {
                type_name: type_name.into(),
                constraints,
            },
        }
    }

    /// Token naming this range: the primitive kind or the nested class.
    pub fn token(&self) -> &str {
        match self {
            RangeConstraint::Primitive { primitive } => primitive.token(),
            RangeConstraint::Nested { nested_type } => &nested_type.type_name,
        }
    }
}

impl PropertyConstraint {
    pub fn new(
        property: impl Into<String>,
        required: bool,
        multiplicity: Multiplicity,
        allowed_ranges: Vec<RangeConstraint>,
    ) -> Self {
        PropertyConstraint {
            property: property.into(),
            required,
            multiplicity,
            allowed_ranges,
        }
    }

    /// A single-valued constraint with one primitive range.
    pub fn scalar(property: impl Into<String>, required: bool, p: Primitive) -> Self {
        Self::new(property, required, Multiplicity::Single, vec![RangeConstraint::primitive(p)])
    }
}

impl DomainSpecification {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain specification serializes")
    }

    /// Number of constraint nodes in the whole tree.
    pub fn constraint_count(&self) -> usize {
        fn walk(cs: &[PropertyConstraint]) -> usize {
            cs.iter()
                .map(|c| {
                    1 + c
                        .allowed_ranges
                        .iter()
                        .map(|r| match r {
                            RangeConstraint::Nested { nested_type } => walk(&nested_type.constraints),
                            RangeConstraint::Primitive { .. } => 0,
                        })
                        .sum::<usize>()
                })
                .sum()
        }
        walk(&self.constraints)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DsError {
    #[error("unknown type: {0}")]
    UnknownType(String),
    #[error("unknown property: {0}")]
    UnknownProperty(String),
    #[error("property {property} is not applicable to {type_name}")]
    PropertyNotApplicable { property: String, type_name: String },
    #[error("domain specification must mark at least one root property as required")]
    EmptyDs,
    #[error("range {range} is not a restriction of the vocabulary ranges of {property}")]
    RangeNotInVocabulary { property: String, range: String },
    #[error("property {property} has no allowed ranges")]
    NoRanges { property: String },
    #[error("property {property} is constrained twice under {type_name}")]
    DuplicateProperty { property: String, type_name: String },
    #[error("domain specification name is empty")]
    EmptyName,
    #[error("stale version for {ds_id}: based on {presented}, current is {current}")]
    Conflict { ds_id: DsId, presented: u64, current: u64 },
    #[error("unknown domain specification: {0}")]
    NotFound(DsId),
}

impl DsError {
    pub fn code(&self) -> &'static str {
        match self {
            DsError::UnknownType(_) => "UnknownType",
            DsError::UnknownProperty(_) => "UnknownProperty",
            DsError::PropertyNotApplicable { .. } => "PropertyNotApplicable",
            DsError::EmptyDs => "EmptyDS",
            DsError::RangeNotInVocabulary { .. } => "RangeNotInVocabulary",
            DsError::NoRanges { .. } => "NoRanges",
            DsError::DuplicateProperty { .. } => "DuplicateProperty",
            DsError::EmptyName => "EmptyName",
            DsError::Conflict { .. } => "Conflict",
            DsError::NotFound(_) => "NotFound",
        }
    }
}

/// Checks every invariant of `ds` against `g`, reporting the first violation.
pub fn check_domain_specification(ds: &DomainSpecification, g: &VocabularyGraph) -> Result<(), DsError> {
    if ds.name.trim().is_empty() {
        return Err(DsError::EmptyName);
    }
    if !g.has_class(&ds.target_type) {
        return Err(DsError::UnknownType(ds.target_type.clone()));
    }
    if !ds.constraints.iter().any(|c| c.required) {
        return Err(DsError::EmptyDs);
    }
    check_constraints(&ds.constraints, &ds.target_type, g)
}

fn check_constraints(constraints: &[PropertyConstraint], type_name: &str, g: &VocabularyGraph) -> Result<(), DsError> {
    let mut seen = BTreeSet::new();
    for c in constraints {
        if !seen.insert(c.property.as_str()) {
            return Err(DsError::DuplicateProperty {
                property: c.property.clone(),
                type_name: type_name.to_string(),
            });
        }
        let prop = g
            .property(&c.property)
            .ok_or_else(|| DsError::UnknownProperty(c.property.clone()))?;
        if !g.is_property_of(&c.property, type_name) {
            return Err(DsError::PropertyNotApplicable {
                property: c.property.clone(),
                type_name: type_name.to_string(),
            });
        }
        if c.allowed_ranges.is_empty() {
            return Err(DsError::NoRanges {
                property: c.property.clone(),
            });
        }
        for range in &c.allowed_ranges {
            let allowed = match range {
                RangeConstraint::Primitive { primitive } => {
                    prop.primitive_ranges().any(|vocab| primitive.narrows(vocab))
                }
                RangeConstraint::Nested { nested_type } => {
                    if !g.has_class(&nested_type.type_name) {
                        return Err(DsError::UnknownType(nested_type.type_name.clone()));
                    }
                    prop.class_ranges().any(|vocab| g.conforms_to(&nested_type.type_name, vocab))
                }
            };
            if !allowed {
                return Err(DsError::RangeNotInVocabulary {
                    property: c.property.clone(),
                    range: range.token().to_string(),
                });
            }
            if let RangeConstraint::Nested { nested_type } = range {
                check_constraints(&nested_type.constraints, &nested_type.type_name, g)?;
            }
        }
    }
    Ok(())
}

/// Every property token used anywhere in the tree, in first-seen order.
pub fn property_tokens(ds: &DomainSpecification) -> Vec<&str> {
    fn walk<'a>(cs: &'a [PropertyConstraint], out: &mut Vec<&'a str>) {
        for c in cs {
            out.push(&c.property);
            for r in &c.allowed_ranges {
                if let RangeConstraint::Nested { nested_type } = r {
                    walk(&nested_type.constraints, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(&ds.constraints, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Widget {
    Text,
    Number,
    Checkbox,
    Date,
    Datetime,
    Url,
    Subform,
}

impl Widget {
    fn for_primitive(p: Primitive) -> Widget {
        match p {
            Primitive::Text => Widget::Text,
            Primitive::Url => Widget::Url,
            Primitive::Number | Primitive::Integer | Primitive::Float => Widget::Number,
            Primitive::Boolean => Widget::Checkbox,
            Primitive::Date => Widget::Date,
            Primitive::DateTime | Primitive::Time => Widget::Datetime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormSchema {
    pub root_label: String,
    pub type_name: String,
    pub fields: Vec<FormField>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormField {
    pub label: String,
    pub property_token: String,
    pub required: bool,
    pub multiplicity: Multiplicity,
    pub widget: Widget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subform: Option<FormSchema>,
    /// Range alternatives when the UI has to offer a type picker.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<FormAlternative>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormAlternative {
    pub range: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subform: Option<FormSchema>,
}

impl FormSchema {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("form schema serializes")
    }

    /// Fields in this schema and every nested subform or alternative.
    pub fn field_count(&self) -> usize {
        self.fields
            .iter()
            .map(|f| {
                1 + f.subform.as_ref().map_or(0, FormSchema::field_count)
                    + f.alternatives
                        .iter()
                        .filter_map(|a| a.subform.as_ref())
                        .map(FormSchema::field_count)
                        .sum::<usize>()
            })
            .sum()
    }
}

/// "streetAddress" -> "Street Address"
pub fn humanize(token: &str) -> String {
    let mut out = String::with_capacity(token.len() + 4);
    let mut prev_lower = false;
    for (i, ch) in token.chars().enumerate() {
        if i == 0 {
            out.extend(ch.to_uppercase());
        } else {
            if ch.is_uppercase() && prev_lower {
                out.push(' ');
            }
            out.push(ch);
        }
        prev_lower = ch.is_lowercase() || ch.is_ascii_digit();
    }
    out
}

pub fn derive_form_schema(ds: &DomainSpecification) -> FormSchema {
    FormSchema {
        root_label: ds.name.clone(),
        type_name: ds.target_type.clone(),
        fields: form_fields(&ds.constraints),
    }
}

fn nested_form(nested: &NestedType) -> FormSchema {
    FormSchema {
        root_label: humanize(&nested.type_name),
        type_name: nested.type_name.clone(),
        fields: form_fields(&nested.constraints),
    }
}

fn form_fields(constraints: &[PropertyConstraint]) -> Vec<FormField> {
    constraints
        .iter()
        .map(|c| {
            let (widget, subform, alternatives) = match c.allowed_ranges.as_slice() {
                [RangeConstraint::Primitive { primitive }] => (Widget::for_primitive(*primitive), None, Vec::new()),
                [RangeConstraint::Nested { nested_type }] => (Widget::Subform, Some(nested_form(nested_type)), Vec::new()),
                ranges => {
                    let alternatives = ranges
                        .iter()
                        .map(|r| FormAlternative {
                            range: r.token().to_string(),
                            subform: match r {
                                RangeConstraint::Nested { nested_type } => Some(nested_form(nested_type)),
                                RangeConstraint::Primitive { .. } => None,
                            },
                        })
                        .collect();
                    (Widget::Text, None, alternatives)
                }
            };
            FormField {
                label: humanize(&c.property),
                property_token: c.property.clone(),
                required: c.required,
                multiplicity: c.multiplicity,
                widget,
                subform,
                alternatives,
            }
        })
        .collect()
}

const BUNDLED: [&str; 2] = [include_str!("../data/ds/lodging-business.json"), include_str!("../data/ds/article.json")];

/// Specifications shipped with the platform, seeded into fresh stores.
pub fn bundled_specs() -> Vec<DomainSpecification> {
    BUNDLED
        .iter()
        .map(|t| DomainSpecification::from_json(t).expect("bundled specification parses"))
        .collect()
}

/// Summary row for pick lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DsSummary {
    pub ds_id: DsId,
    pub name: String,
    pub target_type: String,
    pub version: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegisteredDs {
    pub owner_organization_id: Option<String>,
    pub spec: DomainSpecification,
}

/// Latest version of every saved specification.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DsRegistry {
    specs: BTreeMap<DsId, RegisteredDs>,
}

impl DsRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates `ds` and computes the record that a save would store.
    ///
    /// `ds.version` is the version the edit was based on; for an existing id it
    /// must equal the stored version. The stored copy gets version + 1.
    pub fn prepare_save(
        &self,
        mut ds: DomainSpecification,
        g: &VocabularyGraph,
        owner: Option<&str>,
        fresh_id: impl FnOnce() -> DsId,
    ) -> Result<RegisteredDs, DsError> {
        check_domain_specification(&ds, g)?;
        if ds.ds_id.0.is_empty() {
            ds.ds_id = fresh_id();
        }
        let (version, owner) = match self.specs.get(&ds.ds_id) {
            Some(current) if current.spec.version != ds.version => {
                return Err(DsError::Conflict {
                    ds_id: ds.ds_id,
                    presented: ds.version,
                    current: current.spec.version,
                })
            }
            Some(current) => (current.spec.version + 1, current.owner_organization_id.clone()),
            None => (1, owner.map(str::to_string)),
        };
        ds.version = version;
        Ok(RegisteredDs {
            owner_organization_id: owner,
            spec: ds,
        })
    }

    pub fn insert(&mut self, record: RegisteredDs) {
        self.specs.insert(record.spec.ds_id.clone(), record);
    }

    pub fn save(
        &mut self,
        ds: DomainSpecification,
        g: &VocabularyGraph,
        owner: Option<&str>,
        fresh_id: impl FnOnce() -> DsId,
    ) -> Result<&DomainSpecification, DsError> {
        let record = self.prepare_save(ds, g, owner, fresh_id)?;
        let id = record.spec.ds_id.clone();
        self.insert(record);
        Ok(&self.specs[&id].spec)
    }

    pub fn get(&self, id: &DsId) -> Option<&RegisteredDs> {
        self.specs.get(id)
    }

    pub fn records(&self) -> impl Iterator<Item = &RegisteredDs> {
        self.specs.values()
    }

    /// Sorted by name, then id.
    pub fn list(&self) -> Vec<DsSummary> {
        let mut rows: Vec<DsSummary> = self
            .specs
            .values()
            .map(|r| DsSummary {
                ds_id: r.spec.ds_id.clone(),
                name: r.spec.name.clone(),
                target_type: r.spec.target_type.clone(),
                version: r.spec.version,
            })
            .collect();
        rows.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.ds_id.cmp(&b.ds_id)));
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hotel_ds() -> DomainSpecification {
        DomainSpecification {
            ds_id: DsId::default(),
            name: "Hotel".into(),
            target_type: "Hotel".into(),
            version: 0,
            constraints: vec![PropertyConstraint::scalar("name", true, Primitive::Text)],
        }
    }

    fn counter() -> impl FnMut() -> DsId {
        let mut n = 0;
        move || {
            n += 1;
            DsId(format!("ds-{n}"))
        }
    }

    #[test]
    fn minimal_ds_saves_as_version_one() {
        let g = VocabularyGraph::bundled();
        let mut reg = DsRegistry::new();
        let saved = reg.save(hotel_ds(), &g, None, || DsId("ds-1".into())).unwrap();
        assert_eq!(saved.version, 1);
        assert_eq!(saved.ds_id, DsId("ds-1".into()));
    }

    #[test]
    fn recipe_property_not_applicable_to_hotel() {
        let g = VocabularyGraph::bundled();
        let mut ds = hotel_ds();
        ds.constraints.push(PropertyConstraint::scalar("recipeYield", false, Primitive::Text));
        let err = check_domain_specification(&ds, &g).unwrap_err();
        assert_eq!(
            err,
            DsError::PropertyNotApplicable {
                property: "recipeYield".into(),
                type_name: "Hotel".into()
            }
        );
    }

    #[test]
    fn invariant_errors() {
        let g = VocabularyGraph::bundled();
        let mut ds = hotel_ds();
        ds.target_type = "Spaceship".into();
        assert_eq!(check_domain_specification(&ds, &g).unwrap_err().code(), "UnknownType");

        let mut ds = hotel_ds();
        ds.constraints[0].required = false;
        assert_eq!(check_domain_specification(&ds, &g).unwrap_err(), DsError::EmptyDs);

        let mut ds = hotel_ds();
        ds.constraints.push(PropertyConstraint::scalar("name", false, Primitive::Text));
        assert_eq!(check_domain_specification(&ds, &g).unwrap_err().code(), "DuplicateProperty");

        let mut ds = hotel_ds();
        ds.constraints.push(PropertyConstraint::scalar("bogus", false, Primitive::Text));
        assert_eq!(check_domain_specification(&ds, &g).unwrap_err(), DsError::UnknownProperty("bogus".into()));

        let mut ds = hotel_ds();
        ds.constraints[0] = PropertyConstraint::scalar("name", true, Primitive::Boolean);
        assert_eq!(check_domain_specification(&ds, &g).unwrap_err().code(), "RangeNotInVocabulary");

        // URL narrows Text, a nested subclass narrows the class range
        let mut ds = hotel_ds();
        ds.constraints.push(PropertyConstraint::scalar("description", false, Primitive::Url));
        ds.constraints.push(PropertyConstraint::new(
            "address",
            false,
            Multiplicity::Single,
            vec![RangeConstraint::nested(
                "PostalAddress",
                vec![PropertyConstraint::scalar("recipeYield", false, Primitive::Text)],
            )],
        ));
        assert_eq!(
            check_domain_specification(&ds, &g).unwrap_err(),
            DsError::PropertyNotApplicable {
                property: "recipeYield".into(),
                type_name: "PostalAddress".into()
            }
        );

        let mut ds = hotel_ds();
        ds.constraints.push(PropertyConstraint::new(
            "address",
            false,
            Multiplicity::Single,
            vec![RangeConstraint::nested("GeoCoordinates", vec![])],
        ));
        assert_eq!(check_domain_specification(&ds, &g).unwrap_err().code(), "RangeNotInVocabulary");
    }

    #[test]
    fn versions_increment_and_stale_saves_conflict() {
        let g = VocabularyGraph::bundled();
        let mut reg = DsRegistry::new();
        let mut ids = counter();
        let first = reg.save(hotel_ds(), &g, Some("org"), &mut ids).unwrap().clone();
        let mut edit = first.clone();
        edit.name = "Hotel v2".into();
        let second = reg.save(edit.clone(), &g, None, &mut ids).unwrap().clone();
        assert_eq!(second.version, first.version + 1);
        assert_eq!(second.ds_id, first.ds_id);
        assert_eq!(reg.get(&first.ds_id).unwrap().owner_organization_id.as_deref(), Some("org"));
        // `edit` still says version 1
        assert!(matches!(reg.save(edit, &g, None, &mut ids), Err(DsError::Conflict { current: 2, .. })));
        let third = reg.save(second, &g, None, &mut ids).unwrap();
        assert_eq!(third.version, 3);
        let rows = reg.list();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].version, 3);
    }

    #[test]
    fn list_is_name_sorted() {
        let g = VocabularyGraph::bundled();
        let mut reg = DsRegistry::new();
        assert!(reg.list().is_empty());
        let mut ids = counter();
        let mut b = hotel_ds();
        b.name = "b".into();
        let mut a = hotel_ds();
        a.name = "a".into();
        reg.save(b, &g, None, &mut ids).unwrap();
        reg.save(a, &g, None, &mut ids).unwrap();
        let names: Vec<_> = reg.list().into_iter().map(|r| r.name).collect();
        assert_eq!(names, ["a", "b"]);
    }

    #[test]
    fn hotel_form_with_address_subform() {
        let mut ds = hotel_ds();
        ds.constraints.push(PropertyConstraint::new(
            "address",
            false,
            Multiplicity::Single,
            vec![RangeConstraint::nested(
                "PostalAddress",
                vec![PropertyConstraint::scalar("streetAddress", true, Primitive::Text)],
            )],
        ));
        let form = derive_form_schema(&ds);
        assert_eq!(form.fields.len(), 2);
        assert_eq!(form.fields[0].widget, Widget::Text);
        assert!(form.fields[0].required);
        let sub = form.fields[1].subform.as_ref().unwrap();
        assert_eq!(form.fields[1].widget, Widget::Subform);
        assert_eq!(sub.fields.len(), 1);
        assert!(sub.fields[0].required);
        assert_eq!(sub.fields[0].widget, Widget::Text);
        assert_eq!(sub.fields[0].label, "Street Address");
        assert_eq!(form.field_count(), ds.constraint_count());
        assert_eq!(form.to_json(), derive_form_schema(&ds).to_json());
    }

    #[test]
    fn widget_collapse_rule() {
        let cases = [
            (Primitive::Text, Widget::Text),
            (Primitive::Url, Widget::Url),
            (Primitive::Integer, Widget::Number),
            (Primitive::Float, Widget::Number),
            (Primitive::Number, Widget::Number),
            (Primitive::Boolean, Widget::Checkbox),
            (Primitive::Date, Widget::Date),
            (Primitive::DateTime, Widget::Datetime),
            (Primitive::Time, Widget::Datetime),
        ];
        for (p, w) in cases {
            let mut ds = hotel_ds();
            ds.constraints[0] = PropertyConstraint::scalar("name", true, p);
            assert_eq!(derive_form_schema(&ds).fields[0].widget, w, "{p}");
        }
        let mut ds = hotel_ds();
        ds.constraints[0] = PropertyConstraint::new(
            "name",
            true,
            Multiplicity::Many,
            vec![RangeConstraint::primitive(Primitive::Text), RangeConstraint::primitive(Primitive::Url)],
        );
        let field = &derive_form_schema(&ds).fields[0];
        assert_eq!(field.widget, Widget::Text);
        assert_eq!(field.multiplicity, Multiplicity::Many);
        let ranges: Vec<_> = field.alternatives.iter().map(|a| a.range.as_str()).collect();
        assert_eq!(ranges, ["Text", "URL"]);
    }

    #[test]
    fn file_format_round_trip() {
        let text = r#"{"dsId":"hotel","name":"Hotel","targetType":"Hotel","version":2,"constraints":[
            {"property":"name","required":true,"multiplicity":"single","ranges":[{"kind":"primitive","primitive":"Text"}]},
            {"property":"address","required":false,"multiplicity":"many","ranges":[
                {"kind":"nestedType","nestedType":{"type":"PostalAddress","constraints":[
                    {"property":"streetAddress","required":true,"multiplicity":"single","ranges":[{"kind":"primitive","primitive":"Text"}]}]}},
                {"kind":"primitive","primitive":"Text"}]}]}"#;
        let ds = DomainSpecification::from_json(text).unwrap();
        assert_eq!(ds.constraint_count(), 3);
        assert_eq!(DomainSpecification::from_json(&ds.to_json()).unwrap(), ds);
        assert_eq!(property_tokens(&ds), ["name", "address", "streetAddress"]);
        let form = derive_form_schema(&ds);
        assert_eq!(form.field_count(), 3);
        assert_eq!(form.fields[1].alternatives.len(), 2);
    }

    #[test]
    fn humanize_labels() {
        assert_eq!(humanize("name"), "Name");
        assert_eq!(humanize("streetAddress"), "Street Address");
        assert_eq!(humanize("URL"), "URL");
    }
}
