//! Random document and domain-specification generators.
//!
//! `conforming_document` is the editor contract in code form: filling every
//! required field of a DS with range-conforming values must always validate.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde_json::Number;

use crate::annotation::{AnnotationDocument, Item, Node, PropertyValue, DEFAULT_CONTEXT};
use crate::domainspec::{DomainSpecification, DsId, Multiplicity, NestedType, PropertyConstraint, RangeConstraint};
use crate::vocab::{Primitive, VocabularyGraph};

const WORDS: &[&str] = &[
    "alp", "inn", "snow", "ski", "lift", "valley", "Tirol", "Gästehaus", "piste", "<b>bold</b>", "a \"quote\"",
    "back\\slash", "</script>", "zimmer", "über", "peak",
];

fn words<R: Rng + ?Sized>(rng: &mut R) -> String {
    let n = rng.random_range(1..=4);
    (0..n).map(|_| *WORDS.choose(rng).expect("non-empty")).collect::<Vec<_>>().join(" ")
}

/// A random scalar satisfying `kind`.
pub fn scalar_for<R: Rng + ?Sized>(kind: Primitive, rng: &mut R) -> Item {
    match kind {
        Primitive::Text => Item::Text(words(rng)),
        Primitive::Url => Item::Text(format!("https://example.org/{}/{}", rng.random_range(0..1000), rng.random_range(0..1000))),
        Primitive::Integer => Item::Number(Number::from(rng.random_range(-1000i64..100_000))),
        Primitive::Number | Primitive::Float => {
            let cents = rng.random_range(0..1_000_000) as f64 / 100.0;
            Item::Number(Number::from_f64(cents).expect("finite"))
        }
        Primitive::Boolean => Item::Boolean(rng.random_bool(0.5)),
        Primitive::Date => Item::Text(format!("20{:02}-{:02}-{:02}", rng.random_range(0..30), rng.random_range(1..=12), rng.random_range(1..=28))),
        Primitive::DateTime => Item::Text(format!(
            "20{:02}-{:02}-{:02}T{:02}:{:02}:00Z",
            rng.random_range(0..30),
            rng.random_range(1..=12),
            rng.random_range(1..=28),
            rng.random_range(0..24),
            rng.random_range(0..60)
        )),
        Primitive::Time => Item::Text(format!("{:02}:{:02}:00", rng.random_range(0..24), rng.random_range(0..60))),
    }
}

const PROFILE_TYPES: &[&str] = &["Thing", "Hotel", "Person", "Offer", "PostalAddress", "Article", "Event"];
const PROFILE_PROPS: &[&str] = &["name", "description", "url", "address", "author", "offers", "price", "geo", "about", "x"];

/// A random profile-conforming tree, ignoring any vocabulary.
///
/// `max_depth` bounds nesting (0 = no nested objects); `max_fanout` bounds both
/// properties per node and items per array.
pub fn random_profile_node<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, max_fanout: usize) -> Node {
    let mut node = Node::new(*PROFILE_TYPES.choose(rng).expect("non-empty"));
    if rng.random_bool(0.2) {
        node.id = Some(format!("urn:x:{}", rng.random_range(0..10_000)));
    }
    let n_props = rng.random_range(0..=max_fanout.min(PROFILE_PROPS.len()));
    let mut names: Vec<&str> = PROFILE_PROPS.choose_multiple(rng, n_props).copied().collect();
    names.sort();
    for name in names {
        let item = |rng: &mut R| {
            if max_depth > 0 && rng.random_bool(0.35) {
                Item::Node(Box::new(random_profile_node(rng, max_depth - 1, max_fanout)))
            } else {
                let kind = *Primitive::ALL.choose(rng).expect("non-empty");
                scalar_for(kind, rng)
            }
        };
        let value = if rng.random_bool(0.3) {
            let n = rng.random_range(0..=max_fanout);
            PropertyValue::Many((0..n).map(|_| item(rng)).collect())
        } else {
            PropertyValue::One(item(rng))
        };
        node.properties.insert(name.to_string(), value);
    }
    node
}

pub fn random_profile_document<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, max_fanout: usize) -> AnnotationDocument {
    AnnotationDocument::from_node(DEFAULT_CONTEXT, random_profile_node(rng, max_depth, max_fanout))
        .expect("generated trees conform to the profile")
}

/// Fills every required constraint (and each optional one with probability
/// `optional_rate`) with values drawn from its allowed ranges.
pub fn conforming_document<R: Rng + ?Sized>(
    ds: &DomainSpecification,
    g: &VocabularyGraph,
    rng: &mut R,
    optional_rate: f64,
) -> AnnotationDocument {
    let root_type = pick_subtype(&ds.target_type, g, rng);
    let node = fill_node(root_type, &ds.constraints, g, rng, optional_rate);
    AnnotationDocument::from_node(DEFAULT_CONTEXT, node).expect("generated trees conform to the profile")
}

fn pick_subtype<R: Rng + ?Sized>(class: &str, g: &VocabularyGraph, rng: &mut R) -> String {
    if rng.random_bool(0.5) {
        return class.to_string();
    }
    g.descendants_of(class)
        .ok()
        .and_then(|d| d.choose(rng).map(|s| s.to_string()))
        .unwrap_or_else(|| class.to_string())
}

fn fill_node<R: Rng + ?Sized>(
    type_name: String,
    constraints: &[PropertyConstraint],
    g: &VocabularyGraph,
    rng: &mut R,
    optional_rate: f64,
) -> Node {
    let mut node = Node::new(type_name);
    for c in constraints {
        if !c.required && !rng.random_bool(optional_rate) {
            continue;
        }
        let value = match c.multiplicity {
            Multiplicity::Single => PropertyValue::One(fill_item(&c.allowed_ranges, g, rng, optional_rate)),
            Multiplicity::Many => {
                let n = rng.random_range(1..=3);
                PropertyValue::Many((0..n).map(|_| fill_item(&c.allowed_ranges, g, rng, optional_rate)).collect())
            }
        };
        node.properties.insert(c.property.clone(), value);
    }
    node
}

fn fill_item<R: Rng + ?Sized>(ranges: &[RangeConstraint], g: &VocabularyGraph, rng: &mut R, optional_rate: f64) -> Item {
    match ranges.choose(rng).expect("ranges are non-empty") {
        RangeConstraint::Primitive { primitive } => scalar_for(*primitive, rng),
        RangeConstraint::Nested { nested_type } => {
            let chosen = pick_subtype(&nested_type.type_name, g, rng);
            // the validator binds to the first alternative the type conforms to
            let bound: &NestedType = ranges
                .iter()
                .find_map(|r| match r {
                    RangeConstraint::Nested { nested_type } if g.conforms_to(&chosen, &nested_type.type_name) => Some(nested_type),
                    _ => None,
                })
                .expect("chosen type conforms to its own alternative");
            Item::Node(Box::new(fill_node(chosen, &bound.constraints, g, rng, optional_rate)))
        }
    }
}

/// A random valid DS rooted at a random class.
pub fn random_domain_spec<R: Rng + ?Sized>(g: &VocabularyGraph, rng: &mut R, max_depth: usize) -> DomainSpecification {
    let classes: Vec<&str> = g.classes().map(|c| c.name.as_str()).collect();
    loop {
        let target = *classes.choose(rng).expect("vocabulary has classes");
        let mut constraints = random_constraints(target, g, rng, max_depth, 6);
        if constraints.is_empty() {
            continue;
        }
        let i = rng.random_range(0..constraints.len());
        constraints[i].required = true;
        return DomainSpecification {
            ds_id: DsId(format!("random-{}", rng.random_range(0..u32::MAX))),
            name: format!("{target} profile"),
            target_type: target.to_string(),
            version: 0,
            constraints,
        };
    }
}

fn random_constraints<R: Rng + ?Sized>(
    type_name: &str,
    g: &VocabularyGraph,
    rng: &mut R,
    depth_left: usize,
    max_props: usize,
) -> Vec<PropertyConstraint> {
    let applicable = g.properties_of(type_name).unwrap_or_default();
    let n = rng.random_range(1..=max_props.min(applicable.len().max(1)));
    let mut out = Vec::new();
    for prop in applicable.choose_multiple(rng, n) {
        let mut ranges = Vec::new();
        for vocab_kind in prop.primitive_ranges() {
            if rng.random_bool(0.7) || ranges.is_empty() {
                let narrowed: Vec<Primitive> = Primitive::ALL.into_iter().filter(|p| p.narrows(vocab_kind)).collect();
                ranges.push(RangeConstraint::primitive(*narrowed.choose(rng).expect("kind narrows itself")));
            }
        }
        if depth_left > 0 {
            for class in prop.class_ranges() {
                if rng.random_bool(0.6) {
                    let nested = pick_subtype(class, g, rng);
                    let inner = random_constraints(&nested, g, rng, depth_left - 1, 3);
                    ranges.push(RangeConstraint::nested(nested, inner));
                }
            }
        }
        if ranges.is_empty() {
            continue;
        }
        // identical primitive picks collapse to one
        ranges.dedup_by(|a, b| a == b);
        out.push(PropertyConstraint {
            property: prop.name.clone(),
            required: rng.random_bool(0.4),
            multiplicity: if rng.random_bool(0.3) { Multiplicity::Many } else { Multiplicity::Single },
            allowed_ranges: ranges,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domainspec::check_domain_specification;
    use crate::validate::validate_against_ds;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_specs_are_valid_and_documents_validate() {
        let g = VocabularyGraph::bundled();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let ds = random_domain_spec(&g, &mut rng, 2);
            check_domain_specification(&ds, &g).unwrap_or_else(|e| panic!("{e}: {}", ds.to_json()));
            let doc = conforming_document(&ds, &g, &mut rng, 0.5);
            let report = validate_against_ds(&doc, &ds, &g);
            assert!(report.ok, "{report:?}\n{}\n{}", ds.to_json(), doc.canonical());
        }
    }

    #[test]
    fn profile_documents_respect_bounds() {
        fn depth(n: &Node) -> usize {
            n.properties
                .values()
                .flat_map(PropertyValue::items)
                .map(|i| match i {
                    Item::Node(c) => 1 + depth(c),
                    _ => 0,
                })
                .max()
                .unwrap_or(0)
        }
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let doc = random_profile_document(&mut rng, 4, 5);
            assert!(depth(doc.body()) <= 4);
            assert!(doc.body().properties.len() <= 5);
        }
    }
}
