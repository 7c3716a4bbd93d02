//! Document store for organizations, users, websites, annotations and domain
//! specifications.
//!
//! All state lives in memory behind one lock. Every mutation is first turned
//! into [`JournalEntry`] records, handed to the configured [`Journal`], and
//! then applied, so the file-backed store can rebuild itself by replaying its
//! log. Request counters are atomics and move under the read lock.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use argon2::password_hash::{PasswordHash, PasswordHasher, PasswordVerifier, SaltString};
use argon2::Argon2;
use chrono::{DateTime, Utc};
use parking_lot::{Mutex, RwLock};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::annotation::{parse_value, url_retrieval_key, AnnotationDocument};
use crate::domainspec::{DomainSpecification, DsError, DsId, DsRegistry, DsSummary, RegisteredDs};
use crate::ids::{Clock, SecureTokens, SystemClock, TokenSource, API_KEY_LEN, HASH_LEN};
use crate::vocab::VocabularyGraph;

/// Collisions tolerated before a put gives up.
pub const HASH_RETRIES: usize = 5;
pub const MAX_PAGE_SIZE: usize = 1000;
const ID_LEN: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Organization {
    pub organization_id: String,
    pub name: String,
}

/// Outward view of a user. The password hash never leaves the store.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct User {
    pub user_id: String,
    pub email: String,
    pub organization_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UserRecord {
    pub user_id: String,
    pub email: String,
    pub organization_id: String,
    pub password_hash: String,
}

impl UserRecord {
    fn public(&self) -> User {
        User {
            user_id: self.user_id.clone(),
            email: self.email.clone(),
            organization_id: self.organization_id.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Website {
    pub website_id: String,
    pub organization_id: String,
    pub display_name: String,
    pub api_key: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counters {
    pub annotation_count: u64,
    pub statement_count: u64,
    pub request_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredAnnotation {
    pub hash: String,
    pub website_id: String,
    pub doc: Arc<AnnotationDocument>,
    pub url_key: Option<String>,
    pub cid: Option<String>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

/// Serialized form of a stored annotation (journal and export).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotationRecord {
    pub hash: String,
    pub website_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url_key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cid: Option<String>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    pub document: serde_json::Value,
}

impl StoredAnnotation {
    pub fn record(&self) -> AnnotationRecord {
        AnnotationRecord {
            hash: self.hash.clone(),
            website_id: self.website_id.clone(),
            url_key: self.url_key.clone(),
            cid: self.cid.clone(),
            created_at: self.created_at,
            updated_at: self.updated_at,
            document: self.doc.to_json(),
        }
    }

    pub fn summary(&self) -> AnnotationSummary {
        AnnotationSummary {
            hash: self.hash.clone(),
            root_type: self.doc.root_type().to_string(),
            statement_count: self.doc.statement_count(),
            url_key: self.url_key.clone(),
            cid: self.cid.clone(),
            created_at: self.created_at,
            updated_at: self.updated_at,
        }
    }

    fn from_record(record: AnnotationRecord) -> Result<Self, StoreError> {
        let doc = parse_value(record.document).map_err(|e| StoreError::Corrupt(format!("{}: {e}", record.hash)))?;
        Ok(StoredAnnotation {
            hash: record.hash,
            website_id: record.website_id,
            doc: Arc::new(doc),
            url_key: record.url_key,
            cid: record.cid,
            created_at: record.created_at,
            updated_at: record.updated_at,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotationSummary {
    pub hash: String,
    pub root_type: String,
    pub statement_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub url_key: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cid: Option<String>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotationPage {
    pub page: usize,
    pub page_size: usize,
    pub total: usize,
    pub items: Vec<AnnotationSummary>,
}

#[derive(Debug, Clone)]
pub struct PutOutcome {
    pub hash: String,
    pub created: bool,
    pub annotation: Arc<StoredAnnotation>,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("unknown website: {0}")]
    UnknownWebsite(String),
    #[error("unknown organization: {0}")]
    UnknownOrganization(String),
    #[error("not found")]
    NotFound,
    #[error("no free hash after {HASH_RETRIES} retries")]
    HashSpaceExhausted,
    #[error("invalid page request (page {page}, size {page_size})")]
    InvalidPage { page: usize, page_size: usize },
    #[error("custom identifier must not be empty")]
    InvalidCid,
    #[error("email already registered: {0}")]
    DuplicateEmail(String),
    #[error("invalid email: {0}")]
    InvalidEmail(String),
    #[error("name must not be empty")]
    EmptyName,
    #[error("invalid credentials")]
    BadCredentials,
    #[error(transparent)]
    DomainSpec(#[from] DsError),
    #[error("import requires an empty store")]
    ImportConflict,
    #[error("store data is corrupt: {0}")]
    Corrupt(String),
    #[error("journal i/o failed: {0}")]
    Io(#[from] io::Error),
}

/// One durable mutation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase")]
pub enum JournalEntry {
    Organization(Organization),
    User(UserRecord),
    Website(Website),
    #[serde(rename_all = "camelCase")]
    DeleteWebsite { website_id: String },
    Annotation(AnnotationRecord),
    DeleteAnnotation { hash: String },
    #[serde(rename_all = "camelCase")]
    Requests { website_id: String, count: u64 },
    DomainSpec(RegisteredDs),
}

/// Durability backend. Called with the entries of one mutation, in order.
pub trait Journal: Send + Sync {
    fn append(&self, entries: &[JournalEntry]) -> io::Result<()>;

    /// Rewrites the journal to exactly `entries`.
    fn rewrite(&self, _entries: &[JournalEntry]) -> io::Result<()> {
        Ok(())
    }
}

/// Keeps nothing; state lives only as long as the process.
#[derive(Debug, Default)]
pub struct MemoryJournal;

impl Journal for MemoryJournal {
    fn append(&self, _entries: &[JournalEntry]) -> io::Result<()> {
        Ok(())
    }
}

/// Newline-delimited JSON append log in a single file.
#[derive(Debug)]
pub struct FileJournal {
    path: PathBuf,
    file: Mutex<BufWriter<File>>,
    sync: bool,
}

impl FileJournal {
    /// Opens (creating if needed) the log at `path` and returns it with its existing entries.
    pub fn open(path: impl AsRef<Path>, sync: bool) -> Result<(Self, Vec<JournalEntry>), StoreError> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut entries = Vec::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            let mut lines = reader.lines().enumerate().peekable();
            while let Some((n, line)) = lines.next() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str(&line) {
                    Ok(entry) => entries.push(entry),
                    // a torn final line from a crash mid-write is dropped
                    Err(_) if lines.peek().is_none() => {
                        tracing::warn!(line = n + 1, "dropping incomplete trailing journal line");
                    }
                    Err(e) => return Err(StoreError::Corrupt(format!("line {}: {e}", n + 1))),
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok((
            FileJournal {
                path,
                file: Mutex::new(BufWriter::new(file)),
                sync,
            },
            entries,
        ))
    }
}

fn write_entries(out: &mut impl Write, entries: &[JournalEntry]) -> io::Result<()> {
    for entry in entries {
        serde_json::to_writer(&mut *out, entry)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

impl Journal for FileJournal {
    fn append(&self, entries: &[JournalEntry]) -> io::Result<()> {
        let mut file = self.file.lock();
        write_entries(&mut *file, entries)?;
        file.flush()?;
        if self.sync {
            file.get_ref().sync_data()?;
        }
        Ok(())
    }

    fn rewrite(&self, entries: &[JournalEntry]) -> io::Result<()> {
        let mut file = self.file.lock();
        let tmp = self.path.with_extension("compact");
        {
            let mut out = BufWriter::new(File::create(&tmp)?);
            write_entries(&mut out, entries)?;
            out.flush()?;
            out.get_ref().sync_all()?;
        }
        std::fs::rename(&tmp, &self.path)?;
        *file = BufWriter::new(OpenOptions::new().append(true).open(&self.path)?);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WebsiteExport {
    #[serde(flatten)]
    pub website: Website,
    pub counters: Counters,
}

/// Full dump: the stable interchange format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StoreExport {
    pub format_version: u32,
    pub organizations: Vec<Organization>,
    pub websites: Vec<WebsiteExport>,
    pub annotations: Vec<AnnotationRecord>,
    pub domain_specs: Vec<RegisteredDs>,
}

#[derive(Debug)]
struct WebsiteEntry {
    website: Website,
    annotation_count: u64,
    statement_count: u64,
    requests: Arc<AtomicU64>,
    hashes: HashSet<String>,
}

impl WebsiteEntry {
    fn counters(&self) -> Counters {
        Counters {
            annotation_count: self.annotation_count,
            statement_count: self.statement_count,
            request_count: self.requests.load(Ordering::SeqCst),
        }
    }
}

#[derive(Debug, Default)]
struct State {
    organizations: BTreeMap<String, Organization>,
    users: BTreeMap<String, UserRecord>,
    emails: HashMap<String, String>,
    websites: BTreeMap<String, WebsiteEntry>,
    api_keys: HashMap<String, String>,
    annotations: HashMap<String, Arc<StoredAnnotation>>,
    by_url: HashMap<(String, String), String>,
    by_cid: HashMap<(String, String), String>,
    specs: DsRegistry,
}

impl State {
    fn apply(&mut self, entry: JournalEntry) -> Result<(), StoreError> {
        match entry {
            JournalEntry::Organization(org) => {
                self.organizations.insert(org.organization_id.clone(), org);
            }
            JournalEntry::User(user) => {
                self.emails.insert(user.email.clone(), user.user_id.clone());
                self.users.insert(user.user_id.clone(), user);
            }
            JournalEntry::Website(website) => {
                self.api_keys.insert(website.api_key.clone(), website.website_id.clone());
                match self.websites.get_mut(&website.website_id) {
                    Some(entry) => {
                        if entry.website.api_key != website.api_key {
                            self.api_keys.remove(&entry.website.api_key);
                        }
                        entry.website = website;
                    }
                    None => {
                        self.websites.insert(
                            website.website_id.clone(),
                            WebsiteEntry {
                                website,
                                annotation_count: 0,
                                statement_count: 0,
                                requests: Arc::new(AtomicU64::new(0)),
                                hashes: HashSet::new(),
                            },
                        );
                    }
                }
            }
            JournalEntry::DeleteWebsite { website_id } => {
                if let Some(entry) = self.websites.remove(&website_id) {
                    self.api_keys.remove(&entry.website.api_key);
                    for hash in entry.hashes {
                        if let Some(a) = self.annotations.remove(&hash) {
                            self.unindex(&a);
                        }
                    }
                }
            }
            JournalEntry::Annotation(record) => {
                let annotation = StoredAnnotation::from_record(record)?;
                self.upsert(Arc::new(annotation))?;
            }
            JournalEntry::DeleteAnnotation { hash } => {
                self.remove(&hash);
            }
            JournalEntry::Requests { website_id, count } => {
                if let Some(entry) = self.websites.get(&website_id) {
                    entry.requests.fetch_add(count, Ordering::SeqCst);
                }
            }
            JournalEntry::DomainSpec(record) => self.specs.insert(record),
        }
        Ok(())
    }

    fn unindex(&mut self, a: &StoredAnnotation) {
        if let Some(key) = &a.url_key {
            let k = (a.website_id.clone(), key.clone());
            if self.by_url.get(&k) == Some(&a.hash) {
                self.by_url.remove(&k);
            }
        }
        if let Some(cid) = &a.cid {
            let k = (a.website_id.clone(), cid.clone());
            if self.by_cid.get(&k) == Some(&a.hash) {
                self.by_cid.remove(&k);
            }
        }
    }

    fn upsert(&mut self, a: Arc<StoredAnnotation>) -> Result<(), StoreError> {
        if !self.websites.contains_key(&a.website_id) {
            return Err(StoreError::UnknownWebsite(a.website_id.clone()));
        }
        if let Some(previous) = self.annotations.get(&a.hash).cloned() {
            self.unindex(&previous);
            let entry = self.websites.get_mut(&previous.website_id).expect("indexed website");
            entry.annotation_count -= 1;
            entry.statement_count -= previous.doc.statement_count();
            entry.hashes.remove(&previous.hash);
        }
        if let Some(key) = &a.url_key {
            self.by_url.insert((a.website_id.clone(), key.clone()), a.hash.clone());
        }
        if let Some(cid) = &a.cid {
            self.by_cid.insert((a.website_id.clone(), cid.clone()), a.hash.clone());
        }
        let entry = self.websites.get_mut(&a.website_id).expect("checked above");
        entry.annotation_count += 1;
        entry.statement_count += a.doc.statement_count();
        entry.hashes.insert(a.hash.clone());
        self.annotations.insert(a.hash.clone(), a);
        Ok(())
    }

    fn remove(&mut self, hash: &str) -> Option<Arc<StoredAnnotation>> {
        let a = self.annotations.remove(hash)?;
        self.unindex(&a);
        if let Some(entry) = self.websites.get_mut(&a.website_id) {
            entry.annotation_count -= 1;
            entry.statement_count -= a.doc.statement_count();
            entry.hashes.remove(hash);
        }
        Some(a)
    }

    fn snapshot_entries(&self) -> Vec<JournalEntry> {
        let mut out: Vec<JournalEntry> = Vec::new();
        out.extend(self.organizations.values().cloned().map(JournalEntry::Organization));
        out.extend(self.users.values().cloned().map(JournalEntry::User));
        for entry in self.websites.values() {
            out.push(JournalEntry::Website(entry.website.clone()));
        }
        let mut hashes: Vec<&String> = self.annotations.keys().collect();
        hashes.sort();
        out.extend(hashes.into_iter().map(|h| JournalEntry::Annotation(self.annotations[h].record())));
        for entry in self.websites.values() {
            let count = entry.requests.load(Ordering::SeqCst);
            if count > 0 {
                out.push(JournalEntry::Requests {
                    website_id: entry.website.website_id.clone(),
                    count,
                });
            }
        }
        out.extend(self.specs.records().cloned().map(JournalEntry::DomainSpec));
        out
    }
}

pub fn hash_password(password: &str) -> String {
    let mut salt = [0u8; 16];
    rand::rng().fill_bytes(&mut salt);
    let salt = SaltString::encode_b64(&salt).expect("16 bytes is a valid salt");
    Argon2::default()
        .hash_password(password.as_bytes(), &salt)
        .expect("argon2 hashing with default params")
        .to_string()
}

pub fn verify_password(password: &str, hash: &str) -> bool {
    PasswordHash::new(hash).is_ok_and(|parsed| Argon2::default().verify_password(password.as_bytes(), &parsed).is_ok())
}

pub struct StoreBuilder {
    tokens: Box<dyn TokenSource>,
    clock: Box<dyn Clock>,
    sync: bool,
}

impl StoreBuilder {
    pub fn tokens(mut self, tokens: impl TokenSource + 'static) -> Self {
        self.tokens = Box::new(tokens);
        self
    }

    pub fn clock(mut self, clock: impl Clock + 'static) -> Self {
        self.clock = Box::new(clock);
        self
    }

    /// fsync the journal after every write.
    pub fn sync(mut self, sync: bool) -> Self {
        self.sync = sync;
        self
    }

    pub fn in_memory(self) -> Store {
        Store {
            state: RwLock::new(State::default()),
            journal: Box::new(MemoryJournal),
            tokens: Mutex::new(self.tokens),
            clock: self.clock,
        }
    }

    /// Opens the append-log store at `path`, replaying and compacting it.
    pub fn open(self, path: impl AsRef<Path>) -> Result<Store, StoreError> {
        let (journal, entries) = FileJournal::open(path, self.sync)?;
        let mut state = State::default();
        for entry in entries {
            state.apply(entry)?;
        }
        journal.rewrite(&state.snapshot_entries())?;
        Ok(Store {
            state: RwLock::new(state),
            journal: Box::new(journal),
            tokens: Mutex::new(self.tokens),
            clock: self.clock,
        })
    }

    pub fn with_journal(self, journal: impl Journal + 'static) -> Store {
        Store {
            state: RwLock::new(State::default()),
            journal: Box::new(journal),
            tokens: Mutex::new(self.tokens),
            clock: self.clock,
        }
    }
}

pub struct Store {
    state: RwLock<State>,
    journal: Box<dyn Journal>,
    tokens: Mutex<Box<dyn TokenSource>>,
    clock: Box<dyn Clock>,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let state = self.state.read();
        f.debug_struct("Store")
            .field("websites", &state.websites.len())
            .field("annotations", &state.annotations.len())
            .finish()
    }
}

impl Store {
    pub fn builder() -> StoreBuilder {
        StoreBuilder {
            tokens: Box::new(SecureTokens),
            clock: Box::new(SystemClock),
            sync: false,
        }
    }

    pub fn in_memory() -> Store {
        Self::builder().in_memory()
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Store, StoreError> {
        Self::builder().open(path)
    }

    fn commit(&self, state: &mut State, entries: Vec<JournalEntry>) -> Result<(), StoreError> {
        self.journal.append(&entries)?;
        for entry in entries {
            state.apply(entry)?;
        }
        Ok(())
    }

    fn fresh_token(&self, len: usize, taken: impl Fn(&str) -> bool) -> Result<String, StoreError> {
        let mut tokens = self.tokens.lock();
        for _ in 0..=HASH_RETRIES {
            let candidate = tokens.token(len);
            if !taken(&candidate) {
                return Ok(candidate);
            }
        }
        Err(StoreError::HashSpaceExhausted)
    }

    pub fn create_organization(&self, name: &str) -> Result<Organization, StoreError> {
        if name.trim().is_empty() {
            return Err(StoreError::EmptyName);
        }
        let mut state = self.state.write();
        let id = self.fresh_token(ID_LEN, |t| state.organizations.contains_key(t))?;
        let org = Organization {
            organization_id: id,
            name: name.to_string(),
        };
        self.commit(&mut state, vec![JournalEntry::Organization(org.clone())])?;
        Ok(org)
    }

    pub fn organization(&self, id: &str) -> Option<Organization> {
        self.state.read().organizations.get(id).cloned()
    }

    pub fn create_user(&self, email: &str, password: &str, organization_id: &str) -> Result<User, StoreError> {
        let email = email.trim().to_lowercase();
        if !email.contains('@') || email.starts_with('@') || email.ends_with('@') {
            return Err(StoreError::InvalidEmail(email));
        }
        let password_hash = hash_password(password);
        let mut state = self.state.write();
        if !state.organizations.contains_key(organization_id) {
            return Err(StoreError::UnknownOrganization(organization_id.to_string()));
        }
        if state.emails.contains_key(&email) {
            return Err(StoreError::DuplicateEmail(email));
        }
        let id = self.fresh_token(ID_LEN, |t| state.users.contains_key(t))?;
        let record = UserRecord {
            user_id: id,
            email,
            organization_id: organization_id.to_string(),
            password_hash,
        };
        let user = record.public();
        self.commit(&mut state, vec![JournalEntry::User(record)])?;
        Ok(user)
    }

    pub fn authenticate(&self, email: &str, password: &str) -> Result<User, StoreError> {
        let email = email.trim().to_lowercase();
        let record = {
            let state = self.state.read();
            let id = state.emails.get(&email).ok_or(StoreError::BadCredentials)?;
            state.users[id].clone()
        };
        if verify_password(password, &record.password_hash) {
            Ok(record.public())
        } else {
            Err(StoreError::BadCredentials)
        }
    }

    pub fn user_by_email(&self, email: &str) -> Option<User> {
        let state = self.state.read();
        let id = state.emails.get(&email.trim().to_lowercase())?;
        Some(state.users[id].public())
    }

    pub fn user(&self, user_id: &str) -> Option<User> {
        self.state.read().users.get(user_id).map(UserRecord::public)
    }

    pub fn create_website(&self, organization_id: &str, display_name: &str) -> Result<Website, StoreError> {
        if display_name.trim().is_empty() {
            return Err(StoreError::EmptyName);
        }
        let mut state = self.state.write();
        if !state.organizations.contains_key(organization_id) {
            return Err(StoreError::UnknownOrganization(organization_id.to_string()));
        }
        let website_id = self.fresh_token(ID_LEN, |t| state.websites.contains_key(t))?;
        let api_key = self.fresh_token(API_KEY_LEN, |t| state.api_keys.contains_key(t))?;
        let website = Website {
            website_id,
            organization_id: organization_id.to_string(),
            display_name: display_name.to_string(),
            api_key,
        };
        self.commit(&mut state, vec![JournalEntry::Website(website.clone())])?;
        Ok(website)
    }

    pub fn website(&self, website_id: &str) -> Result<Website, StoreError> {
        self.state
            .read()
            .websites
            .get(website_id)
            .map(|e| e.website.clone())
            .ok_or_else(|| StoreError::UnknownWebsite(website_id.to_string()))
    }

    pub fn website_by_api_key(&self, api_key: &str) -> Option<Website> {
        let state = self.state.read();
        let id = state.api_keys.get(api_key)?;
        Some(state.websites[id].website.clone())
    }

    pub fn websites_of(&self, organization_id: &str) -> Vec<Website> {
        self.state
            .read()
            .websites
            .values()
            .filter(|e| e.website.organization_id == organization_id)
            .map(|e| e.website.clone())
            .collect()
    }

    /// Removes the website and every annotation it owns.
    pub fn delete_website(&self, website_id: &str) -> Result<(), StoreError> {
        let mut state = self.state.write();
        if !state.websites.contains_key(website_id) {
            return Err(StoreError::UnknownWebsite(website_id.to_string()));
        }
        self.commit(
            &mut state,
            vec![JournalEntry::DeleteWebsite {
                website_id: website_id.to_string(),
            }],
        )
    }

    /// Inserts or replaces an annotation.
    ///
    /// The upsert target is the annotation holding `cid` on this website, else
    /// the one holding the document's URL key. A replaced annotation keeps its
    /// hash. If the URL key is held by an annotation other than the target,
    /// that holder is removed.
    pub fn put_annotation(&self, website_id: &str, doc: AnnotationDocument, cid: Option<&str>) -> Result<PutOutcome, StoreError> {
        if cid.is_some_and(str::is_empty) {
            return Err(StoreError::InvalidCid);
        }
        let url_key = doc.url_value().and_then(|u| url_retrieval_key(u).ok());
        let mut state = self.state.write();
        if !state.websites.contains_key(website_id) {
            return Err(StoreError::UnknownWebsite(website_id.to_string()));
        }
        let cid_holder = cid.and_then(|c| state.by_cid.get(&(website_id.to_string(), c.to_string())).cloned());
        let url_holder = url_key
            .as_ref()
            .and_then(|k| state.by_url.get(&(website_id.to_string(), k.clone())).cloned());
        let now = self.clock.now();

        let (annotation, created, evict) = match cid_holder.clone().or(url_holder.clone()) {
            Some(target) => {
                let existing = state.annotations[&target].clone();
                let evict = url_holder.filter(|h| *h != target);
                let annotation = StoredAnnotation {
                    hash: target,
                    website_id: website_id.to_string(),
                    doc: Arc::new(doc),
                    url_key,
                    cid: cid.map(str::to_string).or_else(|| existing.cid.clone()),
                    created_at: existing.created_at,
                    updated_at: now,
                };
                (annotation, false, evict)
            }
            None => {
                let hash = self.fresh_token(HASH_LEN, |t| state.annotations.contains_key(t))?;
                let annotation = StoredAnnotation {
                    hash,
                    website_id: website_id.to_string(),
                    doc: Arc::new(doc),
                    url_key,
                    cid: cid.map(str::to_string),
                    created_at: now,
                    updated_at: now,
                };
                (annotation, true, None)
            }
        };
        let mut entries = Vec::new();
        if let Some(hash) = evict {
            entries.push(JournalEntry::DeleteAnnotation { hash });
        }
        entries.push(JournalEntry::Annotation(annotation.record()));
        let hash = annotation.hash.clone();
        self.commit(&mut state, entries)?;
        Ok(PutOutcome {
            annotation: state.annotations[&hash].clone(),
            hash,
            created,
        })
    }

    /// Replaces the document behind `hash`, keeping hash and cid.
    pub fn replace_annotation(&self, hash: &str, doc: AnnotationDocument) -> Result<Arc<StoredAnnotation>, StoreError> {
        let url_key = doc.url_value().and_then(|u| url_retrieval_key(u).ok());
        let mut state = self.state.write();
        let existing = state.annotations.get(hash).cloned().ok_or(StoreError::NotFound)?;
        let evict = url_key
            .as_ref()
            .and_then(|k| state.by_url.get(&(existing.website_id.clone(), k.clone())).cloned())
            .filter(|h| h != hash);
        let annotation = StoredAnnotation {
            hash: hash.to_string(),
            website_id: existing.website_id.clone(),
            doc: Arc::new(doc),
            url_key,
            cid: existing.cid.clone(),
            created_at: existing.created_at,
            updated_at: self.clock.now(),
        };
        let mut entries = Vec::new();
        if let Some(hash) = evict {
            entries.push(JournalEntry::DeleteAnnotation { hash });
        }
        entries.push(JournalEntry::Annotation(annotation.record()));
        self.commit(&mut state, entries)?;
        Ok(state.annotations[hash].clone())
    }

    fn count_request(&self, state: &State, annotation: &StoredAnnotation) -> Result<(), StoreError> {
        if let Some(entry) = state.websites.get(&annotation.website_id) {
            entry.requests.fetch_add(1, Ordering::SeqCst);
            self.journal.append(&[JournalEntry::Requests {
                website_id: annotation.website_id.clone(),
                count: 1,
            }])?;
        }
        Ok(())
    }

    /// Looks up by hash and counts the request against the owning website.
    pub fn get_by_hash(&self, hash: &str) -> Result<Arc<StoredAnnotation>, StoreError> {
        let state = self.state.read();
        let annotation = state.annotations.get(hash).cloned().ok_or(StoreError::NotFound)?;
        self.count_request(&state, &annotation)?;
        Ok(annotation)
    }

    /// Exact-string lookup of an encoded URL key within one website.
    pub fn get_by_url(&self, website_id: &str, encoded_url: &str) -> Result<Arc<StoredAnnotation>, StoreError> {
        let state = self.state.read();
        let hash = state
            .by_url
            .get(&(website_id.to_string(), encoded_url.to_string()))
            .ok_or(StoreError::NotFound)?;
        let annotation = state.annotations[hash].clone();
        self.count_request(&state, &annotation)?;
        Ok(annotation)
    }

    pub fn get_by_cid(&self, website_id: &str, cid: &str) -> Result<Arc<StoredAnnotation>, StoreError> {
        let state = self.state.read();
        let hash = state
            .by_cid
            .get(&(website_id.to_string(), cid.to_string()))
            .ok_or(StoreError::NotFound)?;
        let annotation = state.annotations[hash].clone();
        self.count_request(&state, &annotation)?;
        Ok(annotation)
    }

    /// Lookup without touching counters (ownership checks, admin views).
    pub fn peek(&self, hash: &str) -> Option<Arc<StoredAnnotation>> {
        self.state.read().annotations.get(hash).cloned()
    }

    pub fn delete_annotation(&self, hash: &str) -> Result<(), StoreError> {
        let mut state = self.state.write();
        if !state.annotations.contains_key(hash) {
            return Err(StoreError::NotFound);
        }
        self.commit(&mut state, vec![JournalEntry::DeleteAnnotation { hash: hash.to_string() }])
    }

    /// One page (1-based) of summaries, most recently updated first.
    pub fn list_annotations(&self, website_id: &str, page: usize, page_size: usize) -> Result<AnnotationPage, StoreError> {
        if page == 0 || page_size == 0 || page_size > MAX_PAGE_SIZE {
            return Err(StoreError::InvalidPage { page, page_size });
        }
        let state = self.state.read();
        let entry = state
            .websites
            .get(website_id)
            .ok_or_else(|| StoreError::UnknownWebsite(website_id.to_string()))?;
        let mut all: Vec<&Arc<StoredAnnotation>> = entry.hashes.iter().map(|h| &state.annotations[h]).collect();
        all.sort_by(|a, b| b.updated_at.cmp(&a.updated_at).then_with(|| a.hash.cmp(&b.hash)));
        let items = all
            .iter()
            .skip((page - 1).saturating_mul(page_size))
            .take(page_size)
            .map(|a| a.summary())
            .collect();
        Ok(AnnotationPage {
            page,
            page_size,
            total: all.len(),
            items,
        })
    }

    pub fn counters(&self, website_id: &str) -> Result<Counters, StoreError> {
        self.state
            .read()
            .websites
            .get(website_id)
            .map(WebsiteEntry::counters)
            .ok_or_else(|| StoreError::UnknownWebsite(website_id.to_string()))
    }

    /// Recomputes annotation and statement totals by full scan, repairing the counters.
    pub fn recount(&self, website_id: &str) -> Result<Counters, StoreError> {
        let mut state = self.state.write();
        let (annotation_count, statement_count) = {
            let State { annotations, .. } = &*state;
            let mine = annotations.values().filter(|a| a.website_id == website_id);
            let counts: Vec<u64> = mine.map(|a| a.doc.statement_count()).collect();
            (counts.len() as u64, counts.iter().sum())
        };
        let entry = state
            .websites
            .get_mut(website_id)
            .ok_or_else(|| StoreError::UnknownWebsite(website_id.to_string()))?;
        if entry.annotation_count != annotation_count || entry.statement_count != statement_count {
            tracing::warn!(website_id, "repairing drifted counters");
        }
        entry.annotation_count = annotation_count;
        entry.statement_count = statement_count;
        Ok(entry.counters())
    }

    pub fn save_domain_spec(
        &self,
        ds: DomainSpecification,
        g: &VocabularyGraph,
        owner_organization_id: Option<&str>,
    ) -> Result<DomainSpecification, StoreError> {
        let mut state = self.state.write();
        let record = state.specs.prepare_save(ds, g, owner_organization_id, || {
            DsId(self.tokens.lock().token(ID_LEN))
        })?;
        let id = record.spec.ds_id.clone();
        self.commit(&mut state, vec![JournalEntry::DomainSpec(record)])?;
        Ok(state.specs.get(&id).expect("just saved").spec.clone())
    }

    pub fn domain_spec(&self, id: &DsId) -> Option<RegisteredDs> {
        self.state.read().specs.get(id).cloned()
    }

    pub fn list_domain_specs(&self) -> Vec<DsSummary> {
        self.state.read().specs.list()
    }

    pub fn export(&self) -> StoreExport {
        let state = self.state.read();
        let mut annotations: Vec<AnnotationRecord> = state.annotations.values().map(|a| a.record()).collect();
        annotations.sort_by(|a, b| a.hash.cmp(&b.hash));
        StoreExport {
            format_version: 1,
            organizations: state.organizations.values().cloned().collect(),
            websites: state
                .websites
                .values()
                .map(|e| WebsiteExport {
                    website: e.website.clone(),
                    counters: e.counters(),
                })
                .collect(),
            annotations,
            domain_specs: state.specs.records().cloned().collect(),
        }
    }

    /// Loads a dump into an empty store. Annotation counters are recomputed.
    pub fn import(&self, dump: StoreExport) -> Result<(), StoreError> {
        let mut state = self.state.write();
        if !state.websites.is_empty() || !state.organizations.is_empty() || !state.annotations.is_empty() {
            return Err(StoreError::ImportConflict);
        }
        let mut entries = Vec::new();
        entries.extend(dump.organizations.into_iter().map(JournalEntry::Organization));
        let mut requests = Vec::new();
        for w in dump.websites {
            if w.counters.request_count > 0 {
                requests.push(JournalEntry::Requests {
                    website_id: w.website.website_id.clone(),
                    count: w.counters.request_count,
                });
            }
            entries.push(JournalEntry::Website(w.website));
        }
        entries.extend(dump.annotations.into_iter().map(JournalEntry::Annotation));
        entries.extend(requests);
        entries.extend(dump.domain_specs.into_iter().map(JournalEntry::DomainSpec));
        // validate against a scratch copy first so a bad dump leaves the store untouched
        let mut scratch = State::default();
        for entry in entries.iter().cloned() {
            scratch.apply(entry)?;
        }
        self.commit(&mut state, entries)
    }
}
