//! REST surface of the annotation platform.
//!
//! Routes:
//!
//! | method | path | auth |
//! |---|---|---|
//! | POST | `/api/auth/login` | - |
//! | POST | `/api/auth/register` | - (only with `open_registration`) |
//! | POST | `/api/annotation/{apiKey}[?cid=]` | api key |
//! | POST | `/api/annotation/{apiKey}/validate?ds=` | api key |
//! | PUT, DELETE | `/api/annotation/{hash}` | session |
//! | GET, POST | `/api/website` | session |
//! | GET, DELETE | `/api/website/{id}` | session |
//! | GET | `/api/website/{id}/stats`, `/api/website/{id}/annotations` | session |
//! | GET, POST | `/api/ds` ; GET `/api/ds/{id}`, `/api/ds/{id}/form` | session |
//! | GET | `/api/vocab`, `/api/vocab/{class}/properties` | - |
//! | POST | `/api/vocab/reload` | session |
//! | GET | `/{hash}`, `/url/{encodedUrl}?key=`, `/cid/{cid}?key=` | - / api key |

pub mod auth;
pub mod config;
pub mod error;
pub mod routes;

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use axum::extract::DefaultBodyLimit;
use axum::routing::{get, post};
use axum::Router;
use semantify_core::domainspec::bundled_specs;
use semantify_core::{load_vocabulary, SharedVocabulary, Store, StoreError, VocabularyGraph};
use tower_http::cors::CorsLayer;

pub use auth::{Claims, Session, TokenKeys};
pub use config::{SeedUser, ServerConfig};
pub use error::{ApiError, ErrorBody};
pub use routes::ItemResult;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub vocabulary_path: Option<PathBuf>,
    pub open_registration: bool,
    pub max_body_bytes: Option<usize>,
    pub permissive_cors: bool,
}

/// Shared handler state; handlers keep no mutable state of their own.
#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub vocab: Arc<SharedVocabulary>,
    pub keys: Arc<TokenKeys>,
    pub options: Arc<Options>,
}

impl AppState {
    pub fn new(store: Arc<Store>, vocab: Arc<SharedVocabulary>, keys: TokenKeys, options: Options) -> Self {
        AppState {
            store,
            vocab,
            keys: Arc::new(keys),
            options: Arc::new(options),
        }
    }
}

pub fn router(state: AppState) -> Router {
    let limit = state.options.max_body_bytes.unwrap_or(64 << 20);
    let cors = state.options.permissive_cors;
    let app = Router::new()
        .route("/api/health", get(routes::health))
        .route("/api/auth/login", post(routes::login))
        .route("/api/auth/register", post(routes::register))
        .route(
            "/api/annotation/{id}",
            post(routes::upload).put(routes::replace).delete(routes::delete),
        )
        .route("/api/annotation/{id}/validate", post(routes::validate))
        .route("/api/website", get(routes::list_websites).post(routes::create_website))
        .route("/api/website/{id}", get(routes::get_website).delete(routes::delete_website))
        .route("/api/website/{id}/stats", get(routes::website_stats))
        .route("/api/website/{id}/annotations", get(routes::website_annotations))
        .route("/api/ds", get(routes::list_ds).post(routes::save_ds))
        .route("/api/ds/{id}", get(routes::get_ds))
        .route("/api/ds/{id}/form", get(routes::ds_form))
        .route("/api/vocab", get(routes::vocab_info))
        .route("/api/vocab/reload", post(routes::vocab_reload))
        .route("/api/vocab/{class}/properties", get(routes::vocab_properties))
        .route("/url/{encoded}", get(routes::by_url))
        .route("/cid/{cid}", get(routes::by_cid))
        .route("/{hash}", get(routes::by_hash))
        .fallback(routes::fallback)
        .layer(DefaultBodyLimit::max(limit))
        .with_state(state);
    if cors {
        app.layer(CorsLayer::permissive())
    } else {
        app
    }
}

/// Adds the bundled specifications a store does not know yet.
pub fn seed_domain_specs(store: &Store, g: &VocabularyGraph) -> Result<(), StoreError> {
    for ds in bundled_specs() {
        if store.domain_spec(&ds.ds_id).is_none() {
            store.save_domain_spec(ds, g, None)?;
        }
    }
    Ok(())
}

/// Creates missing seed users, grouping them into organizations by name.
pub fn seed_users(store: &Store, users: &[SeedUser]) -> Result<(), StoreError> {
    let mut orgs = std::collections::HashMap::new();
    for u in users {
        if let Some(existing) = store.user_by_email(&u.email) {
            orgs.entry(u.organization.clone()).or_insert(existing.organization_id);
            continue;
        }
        let org_id = match orgs.get(&u.organization) {
            Some(id) => Clone::clone(id),
            None => store.create_organization(&u.organization)?.organization_id,
        };
        store.create_user(&u.email, &u.password, &org_id)?;
        orgs.insert(u.organization.clone(), org_id);
    }
    Ok(())
}

/// Builds the full application state from a configuration.
pub fn build_state(config: &ServerConfig) -> anyhow::Result<AppState> {
    let graph = match &config.vocabulary {
        Some(path) => load_vocabulary(path).with_context(|| format!("loading vocabulary {}", path.display()))?,
        None => VocabularyGraph::bundled(),
    };
    tracing::info!(version = graph.version(), classes = graph.classes().count(), "vocabulary loaded");
    let store = match &config.data {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            Store::builder().sync(config.sync_writes).open(path).with_context(|| format!("opening store {}", path.display()))?
        }
        None => {
            tracing::warn!("no data path configured, annotations are kept in memory only");
            Store::in_memory()
        }
    };
    seed_domain_specs(&store, &graph)?;
    seed_users(&store, &config.seed_users)?;
    let secret = match &config.token_secret {
        Some(s) => s.clone().into_bytes(),
        None => {
            tracing::warn!("no token secret configured, sessions will not survive a restart");
            semantify_core::ids::random_token(&mut rand::rng(), 48).into_bytes()
        }
    };
    let keys = TokenKeys::new(&secret, chrono::Duration::hours(config.token_ttl_hours));
    Ok(AppState::new(
        Arc::new(store),
        Arc::new(SharedVocabulary::new(graph)),
        keys,
        Options {
            vocabulary_path: config.vocabulary.clone(),
            open_registration: config.open_registration,
            max_body_bytes: Some(config.max_body_bytes),
            permissive_cors: config.permissive_cors,
        },
    ))
}

pub async fn serve(listener: tokio::net::TcpListener, state: AppState, shutdown: impl std::future::Future<Output = ()> + Send + 'static) -> std::io::Result<()> {
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}
