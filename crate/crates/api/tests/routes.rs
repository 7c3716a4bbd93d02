use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use semantify_api::{build_state, router, seed_domain_specs, AppState, Options, ServerConfig, TokenKeys};
use semantify_core::store::{User, Website};
use semantify_core::{parse_annotation, SharedVocabulary, Store, VocabularyGraph};
use serde_json::{json, Value};
use tower::ServiceExt;

struct Fixture {
    app: Router,
    state: AppState,
    token: String,
    other_token: String,
    site: Website,
}

fn fixture() -> Fixture {
    let store = Store::in_memory();
    let g = VocabularyGraph::bundled();
    seed_domain_specs(&store, &g).unwrap();
    let org = store.create_organization("Ski School").unwrap();
    let other = store.create_organization("Competitor").unwrap();
    store.create_user("admin@ski.example", "pw-ski", &org.organization_id).unwrap();
    let rival = store.create_user("rival@other.example", "pw-other", &other.organization_id).unwrap();
    let site = store.create_website(&org.organization_id, "ski.example").unwrap();
    let keys = TokenKeys::new(b"test-secret", chrono::Duration::hours(24));
    let other_token = keys.issue(&rival).0;
    let state = AppState::new(Arc::new(store), Arc::new(SharedVocabulary::new(g)), keys, Options::default());
    let app = router(state.clone());
    let token = {
        let user = state.store.user_by_email("admin@ski.example").unwrap();
        state.keys.issue(&user).0
    };
    Fixture {
        app,
        state,
        token,
        other_token,
        site,
    }
}

async fn call(app: &Router, method: Method, uri: &str, token: Option<&str>, body: Option<String>) -> (StatusCode, String, Option<String>) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header(header::AUTHORIZATION, format!("Bearer {t}"));
    }
    let req = req.body(body.map(Body::from).unwrap_or_else(Body::empty)).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp.headers().get(header::CONTENT_TYPE).map(|v| v.to_str().unwrap().to_string());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap(), ctype)
}

async fn call_json(app: &Router, method: Method, uri: &str, token: Option<&str>, body: Option<Value>) -> (StatusCode, Value) {
    let (status, text, _) = call(app, method, uri, token, body.map(|b| b.to_string())).await;
    (status, if text.is_empty() { Value::Null } else { serde_json::from_str(&text).unwrap() })
}

fn hotel(name: &str) -> Value {
    json!({"@context": "http://schema.org", "@type": "Hotel", "name": name})
}

fn page(url: &str) -> Value {
    json!({"@context": "http://schema.org", "@type": "Article", "url": url, "headline": "h"})
}

#[tokio::test]
async fn bulk_upload_is_per_item() {
    let f = fixture();
    let uri = format!("/api/annotation/{}", f.site.api_key);
    let body = json!([hotel("a"), "{not json", hotel("c")]);
    let (status, v) = call_json(&f.app, Method::POST, &uri, None, Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    let r = v.as_array().unwrap();
    assert_eq!(r.len(), 3);
    assert_eq!(r[0]["ok"], true);
    assert_eq!(r[1]["ok"], false);
    assert_eq!(r[1]["index"], 1);
    assert_eq!(r[1]["error"]["code"], "NotJson");
    assert_eq!(r[2]["ok"], true);
    assert_eq!(f.state.store.counters(&f.site.website_id).unwrap().annotation_count, 2);

    let (status, v) = call_json(&f.app, Method::POST, &uri, None, Some(json!([]))).await;
    assert_eq!((status, v), (StatusCode::OK, json!([])));

    let (status, v) = call_json(&f.app, Method::POST, &uri, None, Some(json!([hotel("x"), {"@type": "Hotel"}, 7]))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v[1]["error"]["code"], "MissingContext");
    assert_eq!(v[2]["error"]["code"], "NotAnObject");
}

#[tokio::test]
async fn upload_errors_use_the_envelope() {
    let f = fixture();
    let (status, v) = call_json(&f.app, Method::POST, "/api/annotation/nope", None, Some(hotel("a"))).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    assert_eq!(v["error"]["code"], "UnknownApiKey");
    let (status, text, _) = call(&f.app, Method::POST, &format!("/api/annotation/{}", f.site.api_key), None, Some("{oops".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["error"]["code"], "NotJson");
    assert!(v["error"]["message"].is_string());
    let (status, v) = call_json(&f.app, Method::POST, &format!("/api/annotation/{}?cid=a-b", f.site.api_key), None, Some(json!([hotel("a")]))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "CidRequiresSingleDocument");
}

#[tokio::test]
async fn cid_upsert_reports_created_then_replaced() {
    let f = fixture();
    let uri = format!("/api/annotation/{}?cid=e7a1-de", f.site.api_key);
    let (_, first) = call_json(&f.app, Method::POST, &uri, None, Some(hotel("v1"))).await;
    let (_, second) = call_json(&f.app, Method::POST, &uri, None, Some(hotel("v2"))).await;
    assert_eq!(first[0]["created"], true);
    assert_eq!(second[0]["created"], false);
    assert_eq!(first[0]["hash"], second[0]["hash"]);
    let (status, body, _) = call(&f.app, Method::GET, &format!("/cid/e7a1-de?key={}", f.site.api_key), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body.contains("v2"));
    let (status, _, _) = call(&f.app, Method::GET, &format!("/cid/unknown?key={}", f.site.api_key), None, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _, _) = call(&f.app, Method::GET, "/cid/e7a1-de", None, None).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
}

#[tokio::test]
async fn shortener_routes_return_canonical_bytes() {
    let f = fixture();
    let doc = json!({"@context": "http://schema.org", "url": "https://ex.org/p1", "@type": "Article",
                     "author": {"name": "Ann", "@type": "Person"}});
    let (_, r) = call_json(&f.app, Method::POST, &format!("/api/annotation/{}", f.site.api_key), None, Some(doc.clone())).await;
    let hash = r[0]["hash"].as_str().unwrap().to_string();
    assert_eq!(r[0]["statementCount"], 5);
    let canonical = parse_annotation(&doc.to_string()).unwrap().canonical().to_string();

    let (status, body, ctype) = call(&f.app, Method::GET, &format!("/{hash}"), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("application/ld+json"));
    assert_eq!(body, canonical);

    for encoded in ["https%3A%2F%2Fex.org%2Fp1", "https%3a%2f%2fex.org%2fp1", "https:%2F%2Fex.org%2Fp1"] {
        let (status, body, _) = call(&f.app, Method::GET, &format!("/url/{encoded}?key={}", f.site.api_key), None, None).await;
        assert_eq!(status, StatusCode::OK, "{encoded}");
        assert_eq!(body, canonical);
    }
    let (status, _, _) = call(&f.app, Method::GET, &format!("/url/https%3A%2F%2Fex.org%2Fp1%2F?key={}", f.site.api_key), None, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _, _) = call(&f.app, Method::GET, "/url/https%3A%2F%2Fex.org%2Fp1?key=wrong", None, None).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    for missing in ["/ZZZZZZZZZ", "/short", "/not-a-hash!"] {
        let (status, v) = call_json(&f.app, Method::GET, missing, None, None).await;
        assert_eq!(status, StatusCode::NOT_FOUND);
        assert_eq!(v["error"]["code"], "NotFound");
    }
}

#[tokio::test]
async fn stats_track_uploads_and_fetches() {
    let f = fixture();
    let stats = format!("/api/website/{}/stats", f.site.website_id);
    let (status, v) = call_json(&f.app, Method::GET, &stats, Some(&f.token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v, json!({"annotationCount": 0, "statementCount": 0, "requestCount": 0}));
    let (_, r) = call_json(&f.app, Method::POST, &format!("/api/annotation/{}", f.site.api_key), None, Some(json!([hotel("a"), page("https://ski.example/")]))).await;
    let hash = r[0]["hash"].as_str().unwrap().to_string();
    let mut tally = 0;
    for i in 0..50 {
        let uri = if i % 2 == 0 { format!("/{hash}") } else { format!("/url/https%3A%2F%2Fski.example%2F?key={}", f.site.api_key) };
        let (status, _, _) = call(&f.app, Method::GET, &uri, None, None).await;
        assert_eq!(status, StatusCode::OK);
        tally += 1;
    }
    let (_, v) = call_json(&f.app, Method::GET, &stats, Some(&f.token), None).await;
    assert_eq!(v, json!({"annotationCount": 2, "statementCount": 2 + 3, "requestCount": tally}));
}

#[tokio::test]
async fn mutations_require_a_session_of_the_owner() {
    let f = fixture();
    let (_, r) = call_json(&f.app, Method::POST, &format!("/api/annotation/{}", f.site.api_key), None, Some(hotel("a"))).await;
    let hash = r[0]["hash"].as_str().unwrap().to_string();
    let uri = format!("/api/annotation/{hash}");

    let (status, v) = call_json(&f.app, Method::PUT, &uri, None, Some(hotel("b"))).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::UNAUTHORIZED, Some("MissingToken")));
    let (status, v) = call_json(&f.app, Method::PUT, &uri, Some("garbage"), Some(hotel("b"))).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::UNAUTHORIZED, Some("InvalidToken")));
    let (status, _) = call_json(&f.app, Method::PUT, &uri, Some(&f.other_token), Some(hotel("b"))).await;
    assert_eq!(status, StatusCode::FORBIDDEN);
    let (status, _) = call_json(&f.app, Method::DELETE, &uri, Some(&f.other_token), None).await;
    assert_eq!(status, StatusCode::FORBIDDEN);

    let (status, v) = call_json(&f.app, Method::PUT, &uri, Some(&f.token), Some(hotel("b"))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["hash"], hash.as_str());
    let (_, body, _) = call(&f.app, Method::GET, &format!("/{hash}"), None, None).await;
    assert!(body.contains("\"b\""));
    let (status, v) = call_json(&f.app, Method::PUT, &uri, Some(&f.token), Some(json!({"@type": "Hotel"}))).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::BAD_REQUEST, Some("MissingContext")));

    let (status, _) = call_json(&f.app, Method::DELETE, &uri, Some(&f.token), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _, _) = call(&f.app, Method::GET, &format!("/{hash}"), None, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call_json(&f.app, Method::DELETE, &uri, Some(&f.token), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(f.state.store.counters(&f.site.website_id).unwrap().annotation_count, 0);
}

#[tokio::test]
async fn expired_tokens_are_rejected_with_their_own_code() {
    let f = fixture();
    let user: User = f.state.store.user_by_email("admin@ski.example").unwrap();
    let (old, _) = f.state.keys.issue_at(&user, chrono::Utc::now() - chrono::Duration::hours(25));
    let (status, v) = call_json(&f.app, Method::GET, "/api/website", Some(&old), None).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    assert_eq!(v["error"]["code"], "TokenExpired");
    let forged = TokenKeys::new(b"other-secret", chrono::Duration::hours(1)).issue(&user).0;
    let (status, v) = call_json(&f.app, Method::GET, "/api/website", Some(&forged), None).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::UNAUTHORIZED, Some("InvalidToken")));
}

#[tokio::test]
async fn login_issues_working_tokens_and_never_leaks_hashes() {
    let f = fixture();
    let (status, v) = call_json(&f.app, Method::POST, "/api/auth/login", None, Some(json!({"email": "admin@ski.example", "password": "wrong"}))).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::UNAUTHORIZED, Some("BadCredentials")));
    let (status, text, _) = call(
        &f.app,
        Method::POST,
        "/api/auth/login",
        None,
        Some(json!({"email": "ADMIN@ski.example", "password": "pw-ski"}).to_string()),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!(!text.to_lowercase().contains("password"));
    assert!(!text.contains("argon2"));
    let v: Value = serde_json::from_str(&text).unwrap();
    let token = v["token"].as_str().unwrap();
    let (status, sites) = call_json(&f.app, Method::GET, "/api/website", Some(token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(sites.as_array().unwrap().len(), 1);
    assert_eq!(sites[0]["apiKey"], f.site.api_key.as_str());

    // the rival sees none of it
    let (_, sites) = call_json(&f.app, Method::GET, "/api/website", Some(&f.other_token), None).await;
    assert_eq!(sites, json!([]));
    for path in ["", "/stats", "/annotations"] {
        let (status, v) = call_json(&f.app, Method::GET, &format!("/api/website/{}{path}", f.site.website_id), Some(&f.other_token), None).await;
        assert_eq!(status, StatusCode::FORBIDDEN, "{path}");
        assert!(!v.to_string().contains(&f.site.api_key));
    }
}

#[tokio::test]
async fn registration_is_off_by_default() {
    let f = fixture();
    let body = json!({"email": "new@x.example", "password": "p", "organizationName": "New"});
    let (status, v) = call_json(&f.app, Method::POST, "/api/auth/register", None, Some(body.clone())).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::FORBIDDEN, Some("RegistrationClosed")));

    let open = AppState::new(
        f.state.store.clone(),
        f.state.vocab.clone(),
        TokenKeys::new(b"s", chrono::Duration::hours(1)),
        Options {
            open_registration: true,
            ..Options::default()
        },
    );
    let app = router(open);
    let (status, v) = call_json(&app, Method::POST, "/api/auth/register", None, Some(body.clone())).await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, _) = call_json(&app, Method::POST, "/api/website", Some(v["token"].as_str().unwrap()), Some(json!({"displayName": "new.example"}))).await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, _) = call_json(&app, Method::POST, "/api/auth/register", None, Some(body)).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn website_crud_and_listing() {
    let f = fixture();
    let (status, site) = call_json(&f.app, Method::POST, "/api/website", Some(&f.token), Some(json!({"displayName": "blog.example"}))).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = site["websiteId"].as_str().unwrap();
    let key = site["apiKey"].as_str().unwrap();
    let docs: Vec<Value> = (0..7).map(|i| hotel(&format!("h{i}"))).collect();
    call_json(&f.app, Method::POST, &format!("/api/annotation/{key}"), None, Some(Value::Array(docs))).await;
    let (status, page) = call_json(&f.app, Method::GET, &format!("/api/website/{id}/annotations?page=2&pageSize=3"), Some(&f.token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(page["total"], 7);
    assert_eq!(page["items"].as_array().unwrap().len(), 3);
    let (status, _) = call_json(&f.app, Method::GET, &format!("/api/website/{id}/annotations?pageSize=5000"), Some(&f.token), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call_json(&f.app, Method::POST, "/api/website", Some(&f.token), Some(json!({"displayName": " "}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, _) = call_json(&f.app, Method::DELETE, &format!("/api/website/{id}"), Some(&f.token), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = call_json(&f.app, Method::GET, &format!("/api/website/{id}"), Some(&f.token), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call_json(&f.app, Method::POST, &format!("/api/annotation/{key}"), None, Some(hotel("x"))).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
}

#[tokio::test]
async fn validate_route_mirrors_the_validator() {
    let f = fixture();
    let uri = format!("/api/annotation/{}/validate?ds=lodging-business", f.site.api_key);
    let good = json!({"@context": "http://schema.org", "@type": "Hotel", "name": "A",
                      "address": {"@type": "PostalAddress", "streetAddress": "S", "addressLocality": "L"}});
    let (status, v) = call_json(&f.app, Method::POST, &uri, None, Some(good)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v, json!({"ok": true, "violations": []}));
    let (_, v) = call_json(&f.app, Method::POST, &uri, None, Some(hotel("A"))).await;
    assert_eq!(v["ok"], false);
    assert_eq!(v["violations"][0]["path"], "address");
    assert_eq!(v["violations"][0]["code"], "MissingRequired");
    let (status, _) = call_json(&f.app, Method::POST, &format!("/api/annotation/{}/validate?ds=nope", f.site.api_key), None, Some(hotel("A"))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(f.state.store.counters(&f.site.website_id).unwrap().annotation_count, 0);
}

#[tokio::test]
async fn domain_specifications_are_versioned_and_owned() {
    let f = fixture();
    let (status, list) = call_json(&f.app, Method::GET, "/api/ds", Some(&f.token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(list.as_array().unwrap().len(), 2);
    let (status, _) = call_json(&f.app, Method::GET, "/api/ds", None, None).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);

    let (_, bundled) = call_json(&f.app, Method::GET, "/api/ds/article", Some(&f.token), None).await;
    let (status, _) = call_json(&f.app, Method::POST, "/api/ds", Some(&f.token), Some(bundled)).await;
    assert_eq!(status, StatusCode::FORBIDDEN);

    let ds = json!({"dsId": "", "name": "Ski course", "targetType": "Course", "version": 0, "constraints": [
        {"property": "name", "required": true, "multiplicity": "single", "ranges": [{"kind": "primitive", "primitive": "Text"}]}
    ]});
    let (status, saved) = call_json(&f.app, Method::POST, "/api/ds", Some(&f.token), Some(ds)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(saved["version"], 1);
    let id = saved["dsId"].as_str().unwrap().to_string();
    let (status, _) = call_json(&f.app, Method::POST, "/api/ds", Some(&f.token), Some(saved.clone())).await;
    assert_eq!(status, StatusCode::OK);
    let (status, v) = call_json(&f.app, Method::POST, "/api/ds", Some(&f.token), Some(saved.clone())).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::CONFLICT, Some("Conflict")));
    let (status, _) = call_json(&f.app, Method::POST, "/api/ds", Some(&f.other_token), Some(saved)).await;
    assert_eq!(status, StatusCode::FORBIDDEN);

    let (status, form) = call_json(&f.app, Method::GET, &format!("/api/ds/{id}/form"), Some(&f.token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(form["fields"][0]["label"], "Name");
    assert_eq!(form["fields"][0]["widget"], "text");

    let bad = json!({"dsId": "", "name": "x", "targetType": "Hotle", "version": 0, "constraints": []});
    let (status, v) = call_json(&f.app, Method::POST, "/api/ds", Some(&f.token), Some(bad)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
}

#[tokio::test]
async fn vocabulary_routes() {
    let f = fixture();
    let (status, v) = call_json(&f.app, Method::GET, "/api/vocab", None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["version"], "3.4.0");
    let (_, props) = call_json(&f.app, Method::GET, "/api/vocab/Hotel/properties", None, None).await;
    let names: Vec<&str> = props.as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"makesOffer") && names.contains(&"starRating") && !names.contains(&"recipeYield"));
    let (status, v) = call_json(&f.app, Method::GET, "/api/vocab/Hotle/properties", None, None).await;
    assert_eq!((status, v["error"]["code"].as_str()), (StatusCode::NOT_FOUND, Some("UnknownClass")));
    let (status, _) = call_json(&f.app, Method::POST, "/api/vocab/reload", Some(&f.token), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn writes_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let config = ServerConfig {
        data: Some(dir.path().join("nested/journal.ndjson")),
        token_secret: Some("restart-secret".into()),
        seed_users: vec![semantify_api::SeedUser {
            email: "admin@ski.example".into(),
            password: "pw".into(),
            organization: "Ski".into(),
        }],
        ..ServerConfig::default()
    };
    let (hash, token) = {
        let state = build_state(&config).unwrap();
        let app = router(state.clone());
        let (_, login) = call_json(&app, Method::POST, "/api/auth/login", None, Some(json!({"email": "admin@ski.example", "password": "pw"}))).await;
        let token = login["token"].as_str().unwrap().to_string();
        let (_, site) = call_json(&app, Method::POST, "/api/website", Some(&token), Some(json!({"displayName": "s"}))).await;
        let (_, r) = call_json(&app, Method::POST, &format!("/api/annotation/{}", site["apiKey"].as_str().unwrap()), None, Some(hotel("durable"))).await;
        (r[0]["hash"].as_str().unwrap().to_string(), token)
    };
    let state = build_state(&config).unwrap();
    let app = router(state.clone());
    let (status, body, _) = call(&app, Method::GET, &format!("/{hash}"), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body.contains("durable"));
    // same secret: the old session is still valid; seeding did not duplicate anything
    let (status, sites) = call_json(&app, Method::GET, "/api/website", Some(&token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(sites.as_array().unwrap().len(), 1);
    assert_eq!(state.store.list_domain_specs().len(), 2);
}
