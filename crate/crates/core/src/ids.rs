//! Random tokens (annotation hashes, API keys, record ids) and clocks.

use std::sync::atomic::{AtomicI64, Ordering};

use chrono::{DateTime, TimeZone, Utc};
use rand::rngs::StdRng;
use rand::{Rng, RngCore, SeedableRng};

pub const HASH_LEN: usize = 9;
pub const API_KEY_LEN: usize = 32;

const ALPHABET: &[u8; 62] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

/// `^[A-Za-z0-9]{9}$`
pub fn is_valid_hash(s: &str) -> bool {
    s.len() == HASH_LEN && s.bytes().all(|b| b.is_ascii_alphanumeric())
}

pub fn random_token<R: Rng + ?Sized>(rng: &mut R, len: usize) -> String {
    (0..len)
        .map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())] as char)
        .collect()
}

/// Source of alphanumeric tokens. Swappable so tests can force collisions.
pub trait TokenSource: Send {
    fn token(&mut self, len: usize) -> String;
}

/// Draws from the thread-local CSPRNG.
#[derive(Debug, Default)]
pub struct SecureTokens;

impl TokenSource for SecureTokens {
    fn token(&mut self, len: usize) -> String {
        random_token(&mut rand::rng(), len)
    }
}

/// Reproducible tokens for tests and differential runs.
#[derive(Debug)]
pub struct SeededTokens(StdRng);

impl SeededTokens {
    pub fn new(seed: u64) -> Self {
        SeededTokens(StdRng::seed_from_u64(seed))
    }
}

impl TokenSource for SeededTokens {
    fn token(&mut self, len: usize) -> String {
        random_token(&mut self.0 as &mut dyn RngCore, len)
    }
}

/// Replays a fixed list, then falls back to a seeded generator.
#[derive(Debug)]
pub struct ScriptedTokens {
    script: std::collections::VecDeque<String>,
    fallback: SeededTokens,
}

impl ScriptedTokens {
    pub fn new(script: impl IntoIterator<Item = String>) -> Self {
        ScriptedTokens {
            script: script.into_iter().collect(),
            fallback: SeededTokens::new(0),
        }
    }
}

impl TokenSource for ScriptedTokens {
    fn token(&mut self, len: usize) -> String {
        self.script.pop_front().unwrap_or_else(|| self.fallback.token(len))
    }
}

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// Advances one millisecond per reading, starting at a fixed instant.
#[derive(Debug)]
pub struct LogicalClock(AtomicI64);

impl LogicalClock {
    pub fn new() -> Self {
        LogicalClock(AtomicI64::new(1_500_000_000_000))
    }
}

impl Default for LogicalClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for LogicalClock {
    fn now(&self) -> DateTime<Utc> {
        let ms = self.0.fetch_add(1, Ordering::SeqCst);
        Utc.timestamp_millis_opt(ms).single().expect("in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn secure_hashes_match_pattern() {
        let mut src = SecureTokens;
        let hashes: HashSet<String> = (0..2000).map(|_| src.token(HASH_LEN)).collect();
        assert_eq!(hashes.len(), 2000);
        assert!(hashes.iter().all(|h| is_valid_hash(h)));
    }

    #[test]
    fn seeded_tokens_repeat() {
        let a: Vec<_> = (0..5).map({
            let mut s = SeededTokens::new(7);
            move |_| s.token(9)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut s = SeededTokens::new(7);
            move |_| s.token(9)
        }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn hash_pattern() {
        assert!(is_valid_hash("aZ0aZ0aZ0"));
        assert!(!is_valid_hash("aZ0aZ0aZ"));
        assert!(!is_valid_hash("aZ0aZ0aZ-"));
        assert!(!is_valid_hash("aZ0aZ0aZ0a"));
        assert!(!is_valid_hash("äZ0aZ0aZ"));
    }

    #[test]
    fn logical_clock_is_strictly_increasing() {
        let c = LogicalClock::new();
        let a = c.now();
        assert!(c.now() > a);
    }
}
