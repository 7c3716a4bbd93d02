//! Server configuration: one TOML file, then `SEMANTIFY_*` environment overrides.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedUser {
    pub email: String,
    pub password: String,
    pub organization: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub bind: SocketAddr,
    /// Journal file; `None` keeps everything in memory.
    pub data: Option<PathBuf>,
    pub token_secret: Option<String>,
    pub token_ttl_hours: i64,
    /// schema.org subset to load instead of the bundled one.
    pub vocabulary: Option<PathBuf>,
    pub open_registration: bool,
    /// fsync the journal after every write.
    pub sync_writes: bool,
    pub max_body_bytes: usize,
    pub permissive_cors: bool,
    pub seed_users: Vec<SeedUser>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            bind: "127.0.0.1:8080".parse().expect("literal address"),
            data: None,
            token_secret: None,
            token_ttl_hours: 24,
            vocabulary: None,
            open_registration: false,
            sync_writes: false,
            max_body_bytes: 64 << 20,
            permissive_cors: true,
            seed_users: Vec::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("invalid value for {var}: {message}")]
    Env { var: &'static str, message: String },
}

impl ServerConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Reads `path` (or starts from defaults) and applies the environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.to_path_buf(),
                    source,
                })?;
                Self::from_toml(&text).map_err(|source| ConfigError::Toml {
                    path: p.to_path_buf(),
                    source,
                })?
            }
            None => ServerConfig::default(),
        };
        config.apply_env(|k| std::env::var(k).ok())?;
        Ok(config)
    }

    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(v) = var("SEMANTIFY_BIND") {
            self.bind = v.parse().map_err(|e: std::net::AddrParseError| ConfigError::Env {
                var: "SEMANTIFY_BIND",
                message: e.to_string(),
            })?;
        }
        if let Some(v) = var("SEMANTIFY_DATA") {
            self.data = Some(PathBuf::from(v));
        }
        if let Some(v) = var("SEMANTIFY_TOKEN_SECRET") {
            self.token_secret = Some(v);
        }
        if let Some(v) = var("SEMANTIFY_VOCAB") {
            self.vocabulary = Some(PathBuf::from(v));
        }
        Ok(())
    }
}
