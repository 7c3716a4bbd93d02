use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semantify_core::annotation::parse_value;
use semantify_core::generate::random_profile_document;
use semantify_core::parse_annotation;
use serde_json::Value;

fn json_value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        any::<i64>().prop_map(Value::from),
        "[@a-zA-Z:/.]{0,12}".prop_map(Value::String),
    ];
    leaf.prop_recursive(4, 32, 5, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..5).prop_map(Value::Array),
            prop::collection::btree_map(
                prop_oneof![Just("@context".to_string()), Just("@type".to_string()), Just("@id".to_string()), "[@a-z]{1,6}"],
                inner,
                0..5
            )
            .prop_map(|m| Value::Object(m.into_iter().collect())),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonical_form_is_a_fixed_point(seed in any::<u64>(), depth in 0usize..5, fanout in 0usize..6) {
        let doc = random_profile_document(&mut ChaCha8Rng::seed_from_u64(seed), depth, fanout);
        let text = doc.canonical().to_string();
        let back = parse_annotation(&text).unwrap();
        prop_assert_eq!(back.canonical(), text.as_str());
        prop_assert_eq!(&back, &doc);
        let via_value = parse_value(doc.to_json()).unwrap();
        prop_assert_eq!(via_value.canonical(), text.as_str());
    }

    #[test]
    fn whitespace_and_key_order_do_not_change_the_canonical_form(seed in any::<u64>()) {
        let doc = random_profile_document(&mut ChaCha8Rng::seed_from_u64(seed), 3, 4);
        let pretty = serde_json::to_string_pretty(&doc.to_json()).unwrap();
        let reparsed = parse_annotation(&pretty).unwrap();
        prop_assert_eq!(reparsed.canonical(), doc.canonical());
    }

    #[test]
    fn arbitrary_json_never_panics(v in json_value()) {
        if let Ok(doc) = parse_value(v) {
            prop_assert!(doc.statement_count() >= 1);
            prop_assert_eq!(parse_annotation(doc.canonical()).unwrap(), doc);
        }
    }

    #[test]
    fn arbitrary_text_never_panics(s in ".{0,64}") {
        let _ = parse_annotation(&s);
    }
}
