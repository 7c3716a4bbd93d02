//! Shared harness for integration and acceptance tests: an API server on its
//! own runtime thread, a static page server, tenants, fixtures and oracles.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use axum::extract::State;
use axum::http::{header, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use semantify_api::{router, seed_domain_specs, AppState, Options, TokenKeys};
use semantify_core::store::{Organization, User, Website};
use semantify_core::{SharedVocabulary, Store, VocabularyGraph};
use serde_json::{json, Value};
use tokio::sync::oneshot;

pub const TEST_SECRET: &[u8] = b"testbed-secret";

/// Server running on a background thread; shut down on drop.
pub struct Running {
    pub base_url: String,
    pub addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<()>>,
}

impl Drop for Running {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

fn spawn_router(app: Router, workers: usize) -> Running {
    let std_listener = std::net::TcpListener::bind("127.0.0.1:0").expect("bind loopback");
    std_listener.set_nonblocking(true).expect("nonblocking");
    let addr = std_listener.local_addr().unwrap();
    let (tx, rx) = oneshot::channel::<()>();
    let thread = std::thread::spawn(move || {
        let rt = tokio::runtime::Builder::new_multi_thread()
            .worker_threads(workers)
            .enable_all()
            .build()
            .expect("runtime");
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::from_std(std_listener).expect("listener");
            axum::serve(listener, app)
                .with_graceful_shutdown(async {
                    let _ = rx.await;
                })
                .await
                .expect("serve");
        });
    });
    Running {
        base_url: format!("http://{addr}"),
        addr,
        shutdown: Some(tx),
        thread: Some(thread),
    }
}

pub struct TestServer {
    pub state: AppState,
    pub running: Running,
}

impl TestServer {
    pub fn base_url(&self) -> &str {
        &self.running.base_url
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.running.base_url, path)
    }

    pub fn store(&self) -> &Store {
        &self.state.store
    }
}

/// State over an in-memory store with the bundled vocabulary and specifications.
pub fn default_state() -> AppState {
    state_with_store(Store::in_memory())
}

pub fn state_with_store(store: Store) -> AppState {
    let g = VocabularyGraph::bundled();
    seed_domain_specs(&store, &g).expect("seed specifications");
    AppState::new(
        Arc::new(store),
        Arc::new(SharedVocabulary::new(g)),
        TokenKeys::new(TEST_SECRET, chrono::Duration::hours(24)),
        Options::default(),
    )
}

pub fn spawn_server() -> TestServer {
    spawn_with_state(default_state())
}

pub fn spawn_with_state(state: AppState) -> TestServer {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4).clamp(2, 8);
    let running = spawn_router(router(state.clone()), workers);
    TestServer { state, running }
}

/// An organization with one user, one website and a session token.
#[derive(Debug, Clone)]
pub struct Tenant {
    pub org: Organization,
    pub user: User,
    pub site: Website,
    pub token: String,
}

pub fn tenant(state: &AppState, name: &str) -> Tenant {
    let org = state.store.create_organization(name).expect("organization");
    let slug: String = name.chars().filter(char::is_ascii_alphanumeric).collect::<String>().to_lowercase();
    let user = state
        .store
        .create_user(&format!("admin@{slug}.example"), "secret-pw", &org.organization_id)
        .expect("user");
    let site = state.store.create_website(&org.organization_id, &format!("{slug}.example")).expect("website");
    let token = state.keys.issue(&user).0;
    Tenant { org, user, site, token }
}

/// Serves a fixed set of pages by path; anything else is 404.
pub struct StaticSite {
    pub running: Running,
    hits: Arc<AtomicU64>,
}

impl StaticSite {
    pub fn base_url(&self) -> &str {
        &self.running.base_url
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.running.base_url, path)
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::SeqCst)
    }
}

#[derive(Clone)]
struct Pages {
    pages: Arc<HashMap<String, (String, String)>>,
    hits: Arc<AtomicU64>,
}

async fn serve_page(State(p): State<Pages>, uri: Uri) -> Response {
    p.hits.fetch_add(1, Ordering::SeqCst);
    match p.pages.get(uri.path()) {
        Some((ctype, body)) => ([(header::CONTENT_TYPE, ctype.clone())], body.clone()).into_response(),
        None => StatusCode::NOT_FOUND.into_response(),
    }
}

/// `pages` maps a path ("/a.html") to (content type, body).
pub fn spawn_static(pages: HashMap<String, (String, String)>) -> StaticSite {
    let hits = Arc::new(AtomicU64::new(0));
    let app = Router::new().fallback(serve_page).with_state(Pages {
        pages: Arc::new(pages),
        hits: hits.clone(),
    });
    StaticSite {
        running: spawn_router(app, 2),
        hits,
    }
}

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// The ski-school corpus as (file name, text), sorted by name.
pub fn ski_school_corpus() -> Vec<(String, String)> {
    let dir = fixtures_dir().join("ski-school");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

/// Triples a JSON-LD object expands to under the restricted profile, counted
/// straight off the JSON: one per node type, one per scalar value, and one
/// link plus the child's own triples per nested object.
pub fn oracle_statements(v: &Value) -> u64 {
    let Some(obj) = v.as_object() else { return 0 };
    let mut n = u64::from(obj.contains_key("@type"));
    for (k, val) in obj {
        if k.starts_with('@') {
            continue;
        }
        let items: Vec<&Value> = match val {
            Value::Array(a) => a.iter().collect(),
            other => vec![other],
        };
        for item in items {
            n += 1;
            if item.is_object() {
                n += oracle_statements(item);
            }
        }
    }
    n
}

pub const DMO_OFFERS: usize = 33;

/// One accommodation feed record with `DMO_OFFERS` offers and a description.
pub fn dmo_record(i: usize) -> Value {
    let offers: Vec<Value> = (0..DMO_OFFERS)
        .map(|k| json!({"name": format!("Room type {k}"), "price": 60 + (i * 7 + k * 13) % 240, "currency": "EUR"}))
        .collect();
    let categories = ["Hotel", "Guesthouse", "Apartment", "Campground", "IglooVillage", "Hostel"];
    let lang = ["de", "en", "it"][i % 3];
    let city = ["Mayrhofen", "Seefeld", "Kitzbuehel", "Soelden"][i % 4];
    json!({
        "id": format!("acc{i:05}"),
        "lang": lang,
        "category": categories[i % categories.len()],
        "name": format!("Alpenhof {i}"),
        "street": format!("Dorfstrasse {}", i % 200 + 1),
        "city": city,
        "postalCode": format!("6{:03}", i % 1000),
        "lat": 47.0 + (i % 1000) as f64 / 10_000.0,
        "lon": 11.0 + (i % 997) as f64 / 10_000.0,
        "description": format!("Family run accommodation number {i}."),
        "offers": offers,
    })
}

pub fn dmo_feed(n: usize) -> Value {
    Value::Array((0..n).map(dmo_record).collect())
}

/// Page of the synthetic blog used by the page-scrape adapter.
pub fn blog_page(i: usize, base: &str) -> String {
    format!(
        r#"<!DOCTYPE html>
<html lang="en"><head><meta charset="utf-8"><title>Post {i}</title>
<meta property="og:title" content="Trail notes {i}">
<meta name="description" content="Notes from trail {i}.">
<meta name="author" content="Author {a}">
<meta property="article:published_time" content="2017-{m:02}-{d:02}T08:00:00Z">
<link rel="canonical" href="{base}/posts/{i}.html">
</head><body><article><h1>Trail notes {i}</h1><p>Word count body for post number {i} goes here.</p></article></body></html>"#,
        a = i % 7,
        m = i % 12 + 1,
        d = i % 28 + 1,
    )
}
