//! On-disk profile cache: one JSON document per author.
//!
//! Files are named after the percent-encoded author id. Writes go to a
//! temporary file in the same directory that is then renamed over the
//! target, so readers see either the old or the new document.

use std::io::Write;
use std::path::{Path, PathBuf};

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use thiserror::Error;

use crate::model::AuthorProfile;

use super::profile_json::{parse_json, serialize_json};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "UINDEX_CACHE_DIR";

const FILENAME_SET: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'_');

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("no cached profile for `{0}`")]
    CacheMiss(String),

    #[error("corrupt cache entry {path}: {reason}")]
    CorruptCacheEntry { path: PathBuf, reason: String },

    #[error("cache I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct ProfileCache {
    dir: PathBuf,
}

impl ProfileCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Resolve the cache directory: explicit path, then `UINDEX_CACHE_DIR`,
    /// then `$HOME/.cache/uindex`, then `./.uindex-cache`.
    pub fn resolve(explicit: Option<&Path>) -> Self {
        if let Some(dir) = explicit {
            return Self::new(dir);
        }
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()) {
            return Self::new(dir);
        }
        match std::env::var_os("HOME").filter(|v| !v.is_empty()) {
            Some(home) => Self::new(Path::new(&home).join(".cache").join("uindex")),
            None => Self::new(".uindex-cache"),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, author_id: &str) -> PathBuf {
        let name: String = utf8_percent_encode(author_id, FILENAME_SET).collect();
        self.dir.join(format!("{name}.json"))
    }

    /// Atomically write the profile and return the file path.
    pub fn store(&self, profile: &AuthorProfile) -> Result<PathBuf, CacheError> {
        let io = |path: &Path| {
            let path = path.to_owned();
            move |source| CacheError::Io { path, source }
        };
        std::fs::create_dir_all(&self.dir).map_err(io(&self.dir))?;
        let target = self.path_for(profile.author_id());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io(&self.dir))?;
        tmp.write_all(serialize_json(profile).as_bytes())
            .and_then(|_| tmp.as_file().sync_all())
            .map_err(io(tmp.path()))?;
        tmp.persist(&target).map_err(|e| CacheError::Io {
            path: target.clone(),
            source: e.error,
        })?;
        Ok(target)
    }

    pub fn load(&self, author_id: &str) -> Result<AuthorProfile, CacheError> {
        let path = self.path_for(author_id);
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(CacheError::CacheMiss(author_id.to_owned()))
            }
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        let parsed = parse_json(&bytes).map_err(|e| CacheError::CorruptCacheEntry {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        if parsed.profile.author_id() != author_id {
            return Err(CacheError::CorruptCacheEntry {
                path,
                reason: format!("holds author `{}`", parsed.profile.author_id()),
            });
        }
        Ok(parsed.profile)
    }
}
