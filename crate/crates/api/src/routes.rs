use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::header::CONTENT_TYPE;
use axum::http::{StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Json;
use percent_encoding::percent_decode_str;
use semantify_core::batch;
use semantify_core::domainspec::{derive_form_schema, DsId, DsSummary, FormSchema};
use semantify_core::ids::is_valid_hash;
use semantify_core::store::{AnnotationPage, AnnotationSummary, StoredAnnotation, User, Website};
use semantify_core::{
    parse_annotation, url_retrieval_key, validate_against_ds, AnnotationDocument, Counters, DomainSpecification, ParseError,
    ValidationReport,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::auth::Session;
use crate::error::{ApiError, ErrorBody};
use crate::AppState;

pub const LD_JSON: &str = "application/ld+json";

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError::internal(format!("worker failed: {e}"))))
}

fn json_body<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("InvalidBody", e.to_string()))
}

fn parse_document(body: &[u8]) -> Result<AnnotationDocument, ApiError> {
    let text = std::str::from_utf8(body).map_err(|e| ParseError::NotJson(e.to_string()))?;
    Ok(parse_annotation(text)?)
}

// ---- auth

#[derive(Deserialize)]
struct Credentials {
    email: String,
    password: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LoginResponse {
    pub token: String,
    pub expires_at: chrono::DateTime<chrono::Utc>,
    pub user: User,
}

pub async fn login(State(st): State<AppState>, body: Bytes) -> Result<Json<LoginResponse>, ApiError> {
    let creds: Credentials = json_body(&body)?;
    let store = st.store.clone();
    let user = blocking(move || Ok(store.authenticate(&creds.email, &creds.password)?)).await?;
    let (token, expires_at) = st.keys.issue(&user);
    Ok(Json(LoginResponse { token, expires_at, user }))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct Registration {
    email: String,
    password: String,
    organization_name: String,
}

pub async fn register(State(st): State<AppState>, body: Bytes) -> Result<(StatusCode, Json<LoginResponse>), ApiError> {
    if !st.options.open_registration {
        return Err(ApiError::new(StatusCode::FORBIDDEN, "RegistrationClosed", "self-registration is disabled"));
    }
    let reg: Registration = json_body(&body)?;
    let store = st.store.clone();
    let user = blocking(move || {
        if store.user_by_email(&reg.email).is_some() {
            return Err(semantify_core::StoreError::DuplicateEmail(reg.email).into());
        }
        let org = store.create_organization(&reg.organization_name)?;
        Ok(store.create_user(&reg.email, &reg.password, &org.organization_id)?)
    })
    .await?;
    let (token, expires_at) = st.keys.issue(&user);
    Ok((StatusCode::CREATED, Json(LoginResponse { token, expires_at, user })))
}

// ---- annotation upload

#[derive(Deserialize)]
pub struct CidQuery {
    cid: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ItemResult {
    pub index: usize,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

impl ItemResult {
    fn failed(index: usize, e: ApiError) -> Self {
        ItemResult {
            index,
            ok: false,
            hash: None,
            created: None,
            statement_count: None,
            error: Some(e.body),
        }
    }
}

/// Array elements may be objects or JSON text; text is parsed like a request body.
fn element_documents(items: Vec<Value>) -> Vec<Result<AnnotationDocument, ParseError>> {
    let mut slots: Vec<Option<Result<AnnotationDocument, ParseError>>> = Vec::with_capacity(items.len());
    let mut values = Vec::with_capacity(items.len());
    for item in items {
        match item {
            Value::String(text) => match serde_json::from_str::<Value>(&text) {
                Ok(v) => {
                    slots.push(None);
                    values.push(v);
                }
                Err(e) => slots.push(Some(Err(ParseError::NotJson(e.to_string())))),
            },
            other => {
                slots.push(None);
                values.push(other);
            }
        }
    }
    let mut parsed = batch::parse_values(values).into_iter();
    slots
        .into_iter()
        .map(|s| s.unwrap_or_else(|| parsed.next().expect("one parse per deferred slot")))
        .collect()
}

pub async fn upload(
    State(st): State<AppState>,
    Path(api_key): Path<String>,
    Query(q): Query<CidQuery>,
    body: Bytes,
) -> Result<Json<Vec<ItemResult>>, ApiError> {
    let website = st.store.website_by_api_key(&api_key).ok_or_else(ApiError::unknown_api_key)?;
    let value: Value = serde_json::from_slice(&body).map_err(|e| ApiError::bad_request("NotJson", e.to_string()))?;
    let items = match value {
        Value::Array(items) => {
            if q.cid.is_some() {
                return Err(ApiError::bad_request("CidRequiresSingleDocument", "cid applies to single-document posts only"));
            }
            items
        }
        single => vec![single],
    };
    let store = st.store.clone();
    let results = blocking(move || {
        let docs = element_documents(items);
        Ok(docs
            .into_iter()
            .enumerate()
            .map(|(index, doc)| {
                let put = doc
                    .map_err(ApiError::from)
                    .and_then(|d| store.put_annotation(&website.website_id, d, q.cid.as_deref()).map_err(ApiError::from));
                match put {
                    Ok(out) => ItemResult {
                        index,
                        ok: true,
                        statement_count: Some(out.annotation.doc.statement_count()),
                        hash: Some(out.hash),
                        created: Some(out.created),
                        error: None,
                    },
                    Err(e) => ItemResult::failed(index, e),
                }
            })
            .collect())
    })
    .await?;
    Ok(Json(results))
}

#[derive(Deserialize)]
pub struct DsQuery {
    ds: Option<String>,
}

pub async fn validate(
    State(st): State<AppState>,
    Path(api_key): Path<String>,
    Query(q): Query<DsQuery>,
    body: Bytes,
) -> Result<Json<ValidationReport>, ApiError> {
    st.store.website_by_api_key(&api_key).ok_or_else(ApiError::unknown_api_key)?;
    let ds_id = q.ds.ok_or_else(|| ApiError::bad_request("MissingDs", "query parameter ds is required"))?;
    let ds = st.store.domain_spec(&DsId(ds_id.clone())).ok_or_else(|| ApiError::from(semantify_core::DsError::NotFound(DsId(ds_id))))?;
    let doc = parse_document(&body)?;
    let vocab = st.vocab.snapshot();
    Ok(Json(validate_against_ds(&doc, &ds.spec, &vocab)))
}

fn owned_annotation(st: &AppState, session: &Session, hash: &str) -> Result<std::sync::Arc<StoredAnnotation>, ApiError> {
    let annotation = st.store.peek(hash).ok_or_else(ApiError::not_found)?;
    let website = st.store.website(&annotation.website_id)?;
    if website.organization_id != session.organization_id() {
        return Err(ApiError::forbidden());
    }
    Ok(annotation)
}

pub async fn replace(
    State(st): State<AppState>,
    session: Session,
    Path(hash): Path<String>,
    body: Bytes,
) -> Result<Json<AnnotationSummary>, ApiError> {
    owned_annotation(&st, &session, &hash)?;
    let doc = parse_document(&body)?;
    let store = st.store.clone();
    let stored = blocking(move || Ok(store.replace_annotation(&hash, doc)?)).await?;
    Ok(Json(stored.summary()))
}

pub async fn delete(State(st): State<AppState>, session: Session, Path(hash): Path<String>) -> Result<StatusCode, ApiError> {
    owned_annotation(&st, &session, &hash)?;
    let store = st.store.clone();
    blocking(move || Ok(store.delete_annotation(&hash)?)).await?;
    Ok(StatusCode::NO_CONTENT)
}

// ---- shortener retrieval

fn ld_json(annotation: &StoredAnnotation) -> Response {
    ([(CONTENT_TYPE, LD_JSON)], annotation.doc.canonical().to_string()).into_response()
}

#[derive(Deserialize)]
pub struct KeyQuery {
    key: Option<String>,
}

fn scoped_website(st: &AppState, q: &KeyQuery) -> Result<Website, ApiError> {
    q.key
        .as_deref()
        .and_then(|k| st.store.website_by_api_key(k))
        .ok_or_else(ApiError::unknown_api_key)
}

pub async fn by_hash(State(st): State<AppState>, Path(hash): Path<String>) -> Result<Response, ApiError> {
    if !is_valid_hash(&hash) {
        return Err(ApiError::not_found());
    }
    let annotation = st.store.get_by_hash(&hash)?;
    Ok(ld_json(&annotation))
}

/// The raw path segment is decoded and re-encoded, so any valid encoding of
/// the same URL string finds the same annotation.
pub async fn by_url(State(st): State<AppState>, uri: Uri, Query(q): Query<KeyQuery>) -> Result<Response, ApiError> {
    let website = scoped_website(&st, &q)?;
    let raw = uri.path().strip_prefix("/url/").ok_or_else(ApiError::not_found)?;
    let url = percent_decode_str(raw).decode_utf8().map_err(|_| ApiError::not_found())?;
    let key = url_retrieval_key(&url).map_err(|_| ApiError::not_found())?;
    let annotation = st.store.get_by_url(&website.website_id, &key)?;
    Ok(ld_json(&annotation))
}

pub async fn by_cid(State(st): State<AppState>, Path(cid): Path<String>, Query(q): Query<KeyQuery>) -> Result<Response, ApiError> {
    let website = scoped_website(&st, &q)?;
    let annotation = st.store.get_by_cid(&website.website_id, &cid)?;
    Ok(ld_json(&annotation))
}

// ---- websites

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct NewWebsite {
    display_name: String,
}

fn owned_website(st: &AppState, session: &Session, id: &str) -> Result<Website, ApiError> {
    let website = st.store.website(id)?;
    if website.organization_id != session.organization_id() {
        return Err(ApiError::forbidden());
    }
    Ok(website)
}

pub async fn list_websites(State(st): State<AppState>, session: Session) -> Json<Vec<Website>> {
    let mut sites = st.store.websites_of(session.organization_id());
    sites.sort_by(|a, b| a.display_name.cmp(&b.display_name).then_with(|| a.website_id.cmp(&b.website_id)));
    Json(sites)
}

pub async fn create_website(State(st): State<AppState>, session: Session, body: Bytes) -> Result<(StatusCode, Json<Website>), ApiError> {
    let req: NewWebsite = json_body(&body)?;
    let site = st.store.create_website(session.organization_id(), &req.display_name)?;
    Ok((StatusCode::CREATED, Json(site)))
}

pub async fn get_website(State(st): State<AppState>, session: Session, Path(id): Path<String>) -> Result<Json<Website>, ApiError> {
    owned_website(&st, &session, &id).map(Json)
}

pub async fn delete_website(State(st): State<AppState>, session: Session, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    owned_website(&st, &session, &id)?;
    let store = st.store.clone();
    blocking(move || Ok(store.delete_website(&id)?)).await?;
    Ok(StatusCode::NO_CONTENT)
}

pub async fn website_stats(State(st): State<AppState>, session: Session, Path(id): Path<String>) -> Result<Json<Counters>, ApiError> {
    owned_website(&st, &session, &id)?;
    Ok(Json(st.store.counters(&id)?))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PageQuery {
    page: Option<usize>,
    page_size: Option<usize>,
}

pub async fn website_annotations(
    State(st): State<AppState>,
    session: Session,
    Path(id): Path<String>,
    Query(q): Query<PageQuery>,
) -> Result<Json<AnnotationPage>, ApiError> {
    owned_website(&st, &session, &id)?;
    Ok(Json(st.store.list_annotations(&id, q.page.unwrap_or(1), q.page_size.unwrap_or(50))?))
}

// ---- domain specifications

pub async fn list_ds(State(st): State<AppState>, _session: Session) -> Json<Vec<DsSummary>> {
    Json(st.store.list_domain_specs())
}

pub async fn get_ds(State(st): State<AppState>, _session: Session, Path(id): Path<String>) -> Result<Json<DomainSpecification>, ApiError> {
    st.store
        .domain_spec(&DsId(id.clone()))
        .map(|r| Json(r.spec))
        .ok_or_else(|| semantify_core::DsError::NotFound(DsId(id)).into())
}

pub async fn ds_form(State(st): State<AppState>, _session: Session, Path(id): Path<String>) -> Result<Json<FormSchema>, ApiError> {
    st.store
        .domain_spec(&DsId(id.clone()))
        .map(|r| Json(derive_form_schema(&r.spec)))
        .ok_or_else(|| semantify_core::DsError::NotFound(DsId(id)).into())
}

/// Creates or updates; writable only by the owning organization. Bundled
/// specifications have no owner and are read-only.
pub async fn save_ds(State(st): State<AppState>, session: Session, body: Bytes) -> Result<Json<DomainSpecification>, ApiError> {
    let ds: DomainSpecification = serde_json::from_slice(&body).map_err(|e| ApiError::bad_request("InvalidDomainSpecification", e.to_string()))?;
    if let Some(existing) = st.store.domain_spec(&ds.ds_id) {
        if existing.owner_organization_id.as_deref() != Some(session.organization_id()) {
            return Err(ApiError::forbidden());
        }
    }
    let vocab = st.vocab.snapshot();
    let saved = st.store.save_domain_spec(ds, &vocab, Some(session.organization_id()))?;
    Ok(Json(saved))
}

// ---- vocabulary

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VocabInfo {
    version: String,
    class_count: usize,
    property_count: usize,
}

pub async fn vocab_info(State(st): State<AppState>) -> Json<VocabInfo> {
    let g = st.vocab.snapshot();
    Json(VocabInfo {
        version: g.version().to_string(),
        class_count: g.classes().count(),
        property_count: g.properties().count(),
    })
}

pub async fn vocab_properties(State(st): State<AppState>, Path(class): Path<String>) -> Result<Response, ApiError> {
    let g = st.vocab.snapshot();
    let props = g
        .properties_of(&class)
        .map_err(|e| ApiError::new(StatusCode::NOT_FOUND, "UnknownClass", e.to_string()))?;
    Ok(Json(props).into_response())
}

pub async fn vocab_reload(State(st): State<AppState>, _session: Session) -> Result<Json<VocabInfo>, ApiError> {
    let path = st
        .options
        .vocabulary_path
        .clone()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "NoVocabularyFile", "server runs on the bundled vocabulary"))?;
    let vocab = st.vocab.clone();
    let g = blocking(move || {
        vocab
            .reload(&path)
            .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "InvalidVocabulary", e.to_string()))
    })
    .await?;
    tracing::info!(version = g.version(), "vocabulary reloaded");
    Ok(Json(VocabInfo {
        version: g.version().to_string(),
        class_count: g.classes().count(),
        property_count: g.properties().count(),
    }))
}

pub async fn health(State(st): State<AppState>) -> Json<Value> {
    Json(serde_json::json!({"status": "ok", "vocabularyVersion": st.vocab.snapshot().version()}))
}

pub async fn fallback() -> ApiError {
    ApiError::not_found()
}
