//! Loading profiles and event logs from files, a local cache, and a remote
//! catalog.
//!
//! Every path ends in [`AuthorProfile::new`] / [`Publication::new`], so no
//! loader can produce a profile that violates their invariants.
//!
//! [`Publication::new`]: crate::model::Publication::new

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{AuthorProfile, Provenance};

pub mod cache;
pub mod catalog;
pub mod events;
pub mod profile_csv;
pub mod profile_json;

pub use cache::{CacheError, ProfileCache, CACHE_DIR_ENV};
pub use catalog::{CatalogClient, CatalogConfig, FetchError, FetchOutcome};
pub use events::{parse_events, serialize_events};
pub use profile_csv::{parse_csv, write_csv};
pub use profile_json::{parse_json, serialize_json, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("{at}: duplicate publication id `{id}`")]
    DuplicateId { at: String, id: String },

    #[error("{at}: invalid publication `{id}`: {reason}")]
    InvalidPublication {
        at: String,
        id: String,
        reason: String,
    },

    #[error("{path}: {reason}")]
    Malformed { path: String, reason: String },

    #[error("unsupported schema_version {0} (supported: {SCHEMA_VERSION})")]
    SchemaVersionUnsupported(i64),

    #[error("event {sequence_no}: {reason}")]
    InvalidEvent { sequence_no: u64, reason: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}: unrecognized file type (expected .csv or .json)")]
    UnknownFormat(PathBuf),
}

/// A parsed profile plus non-fatal notes (e.g. ignored fields).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedProfile {
    pub profile: AuthorProfile,
    pub warnings: Vec<String>,
}

/// Load a profile from a `.csv` or `.json` file.
///
/// CSV files carry no author id; the file stem is used.
pub fn load_profile(path: &Path) -> Result<ParsedProfile, IngestError> {
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_owned(),
        source,
    })?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let location = path.display().to_string();
    match ext.as_deref() {
        Some("csv") => {
            let author_id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("author")
                .to_owned();
            let profile =
                parse_csv(&author_id, &bytes)?.with_source(Provenance::local_file(location));
            Ok(ParsedProfile {
                profile,
                warnings: Vec::new(),
            })
        }
        Some("json") => {
            let mut parsed = parse_json(&bytes)?;
            if parsed.profile.source().location.is_none() {
                let source = parsed.profile.source().clone();
                parsed.profile = parsed.profile.with_source(Provenance {
                    location: Some(location),
                    ..source
                });
            }
            Ok(parsed)
        }
        _ => Err(IngestError::UnknownFormat(path.to_owned())),
    }
}
