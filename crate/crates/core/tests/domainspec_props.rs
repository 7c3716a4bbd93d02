use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::SeedableRng;
use semantify_core::domainspec::{bundled_specs, check_domain_specification};
use semantify_core::generate::{conforming_document, random_domain_spec};
use semantify_core::{derive_form_schema, parse_annotation, validate_against_ds, DomainSpecification, ViolationCode, VocabularyGraph};
use serde_json::Value;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn load_ds(name: &str) -> DomainSpecification {
    bundled_specs().into_iter().find(|d| d.ds_id.0 == name).unwrap()
}

/// Counts constraint objects in the serialized form, without the typed model.
fn json_constraints(list: &Value) -> usize {
    list.as_array()
        .unwrap()
        .iter()
        .map(|c| {
            1 + c["ranges"]
                .as_array()
                .unwrap()
                .iter()
                .filter(|r| r["kind"] == "nestedType")
                .map(|r| json_constraints(&r["nestedType"]["constraints"]))
                .sum::<usize>()
        })
        .sum()
}

#[test]
fn random_specs_round_trip_and_forms_cover_every_constraint() {
    let g = VocabularyGraph::bundled();
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..300 {
        let ds = random_domain_spec(&g, &mut rng, 3);
        let text = ds.to_json();
        let back = DomainSpecification::from_json(&text).unwrap();
        assert_eq!(back, ds);
        assert_eq!(back.to_json(), text);
        let raw: Value = serde_json::from_str(&text).unwrap();
        let form = derive_form_schema(&ds);
        assert_eq!(form.field_count(), json_constraints(&raw["constraints"]), "{text}");
        assert_eq!(form.type_name, ds.target_type);
    }
}

#[test]
fn bundled_fixture_specs_are_valid() {
    let g = VocabularyGraph::bundled();
    for name in ["lodging-business", "article"] {
        let ds = load_ds(name);
        check_domain_specification(&ds, &g).unwrap();
        let raw: Value = serde_json::from_str(&ds.to_json()).unwrap();
        assert_eq!(derive_form_schema(&ds).field_count(), json_constraints(&raw["constraints"]));
    }
}

#[test]
fn conforming_documents_validate_and_dropping_a_required_root_field_fails() {
    let g = VocabularyGraph::bundled();
    let mut rng = StdRng::seed_from_u64(77);
    for _ in 0..500 {
        let ds = random_domain_spec(&g, &mut rng, 3);
        let doc = conforming_document(&ds, &g, &mut rng, 0.5);
        let report = validate_against_ds(&doc, &ds, &g);
        assert!(report.ok, "{report:?}\n{}\n{}", ds.to_json(), doc.canonical());

        let required = ds.constraints.iter().find(|c| c.required).expect("generator marks one required");
        let mut v = doc.to_json();
        v.as_object_mut().unwrap().remove(&required.property);
        let broken = semantify_core::annotation::parse_value(v).unwrap();
        let keys = validate_against_ds(&broken, &ds, &g).keys();
        assert!(keys.contains(&(required.property.clone(), ViolationCode::MissingRequired)), "{keys:?}");
    }
}

fn code(s: &str) -> ViolationCode {
    serde_json::from_value(Value::String(s.into())).unwrap()
}

#[test]
fn violation_fixtures_report_exactly_the_expected_pairs() {
    let g = VocabularyGraph::bundled();
    let cases: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(format!("{FIXTURES}/violations.json")).unwrap()).unwrap();
    let mut violating = 0;
    for case in &cases {
        let ds = load_ds(case["ds"].as_str().unwrap());
        let doc = parse_annotation(&case["document"].to_string()).unwrap();
        let expected: BTreeSet<(String, ViolationCode)> = case["expected"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (e[0].as_str().unwrap().to_string(), code(e[1].as_str().unwrap())))
            .collect();
        let report = validate_against_ds(&doc, &ds, &g);
        assert_eq!(report.keys(), expected, "{}", case["name"]);
        assert_eq!(report.ok, expected.is_empty());
        assert_eq!(report.violations.len(), expected.len(), "duplicates in {}", case["name"]);
        violating += usize::from(!expected.is_empty());
    }
    assert_eq!(violating, 20);
}
