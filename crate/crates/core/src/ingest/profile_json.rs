//! JSON profile documents.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "author_id": "A123",
//!   "display_name": "Jane Doe",
//!   "source": { "kind": "local-file" },
//!   "publications": [
//!     { "id": "pub1", "title": "…", "year": 2019, "citations": 770, "impact_factor": 4.15 }
//!   ]
//! }
//! ```
//!
//! Parsing walks the document by hand so that errors name the exact path
//! (`publications[2].citations`) and unknown fields become warnings.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::model::{AuthorProfile, Provenance, Publication};

use super::{IngestError, ParsedProfile};

pub const SCHEMA_VERSION: i64 = 1;

const DOC_FIELDS: &[&str] = &[
    "schema_version",
    "author_id",
    "display_name",
    "source",
    "publications",
];
const PUB_FIELDS: &[&str] = &["id", "title", "year", "citations", "impact_factor"];

#[derive(Serialize)]
struct ProfileDocument<'a> {
    schema_version: i64,
    author_id: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    display_name: Option<&'a str>,
    source: &'a Provenance,
    publications: &'a [Publication],
}

/// Canonical pretty-printed JSON, without a trailing newline.
pub fn serialize_json(profile: &AuthorProfile) -> String {
    let doc = ProfileDocument {
        schema_version: SCHEMA_VERSION,
        author_id: profile.author_id(),
        display_name: profile.display_name(),
        source: profile.source(),
        publications: profile.publications(),
    };
    serde_json::to_string_pretty(&doc).expect("profile documents always serialize")
}

fn malformed(path: impl Into<String>, reason: impl Into<String>) -> IngestError {
    IngestError::Malformed {
        path: path.into(),
        reason: reason.into(),
    }
}

fn warn_unknown(
    obj: &Map<String, Value>,
    known: &[&str],
    prefix: &str,
    warnings: &mut Vec<String>,
) {
    for key in obj.keys() {
        if !known.contains(&key.as_str()) {
            let path = if prefix.is_empty() {
                key.clone()
            } else {
                format!("{prefix}.{key}")
            };
            warnings.push(format!("{path}: unknown field ignored"));
        }
    }
}

fn optional<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

pub fn parse_json(bytes: &[u8]) -> Result<ParsedProfile, IngestError> {
    let root: Value = serde_json::from_slice(bytes).map_err(|e| malformed("$", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| malformed("$", "expected a JSON object"))?;
    let mut warnings = Vec::new();
    warn_unknown(obj, DOC_FIELDS, "", &mut warnings);

    let version = obj
        .get("schema_version")
        .ok_or_else(|| malformed("schema_version", "missing field"))?
        .as_i64()
        .ok_or_else(|| malformed("schema_version", "expected an integer"))?;
    if version != SCHEMA_VERSION {
        return Err(IngestError::SchemaVersionUnsupported(version));
    }

    let author_id = obj
        .get("author_id")
        .ok_or_else(|| malformed("author_id", "missing field"))?
        .as_str()
        .ok_or_else(|| malformed("author_id", "expected a string"))?;
    let display_name = match optional(obj, "display_name") {
        Some(v) => Some(
            v.as_str()
                .ok_or_else(|| malformed("display_name", "expected a string"))?,
        ),
        None => None,
    };
    let source = match optional(obj, "source") {
        Some(v) => serde_json::from_value::<Provenance>(v.clone())
            .map_err(|e| malformed("source", e.to_string()))?,
        None => Provenance::default(),
    };

    let items = obj
        .get("publications")
        .ok_or_else(|| malformed("publications", "missing field"))?
        .as_array()
        .ok_or_else(|| malformed("publications", "expected an array"))?;

    let mut seen = HashSet::new();
    let mut publications = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let at = format!("publications[{i}]");
        let publication = parse_publication(item, &at, &mut warnings)?;
        if !seen.insert(publication.id().to_owned()) {
            return Err(IngestError::DuplicateId {
                at,
                id: publication.id().to_owned(),
            });
        }
        publications.push(publication);
    }

    let mut profile = AuthorProfile::new(author_id, publications)
        .expect("ids checked while parsing")
        .with_source(source);
    if let Some(name) = display_name {
        profile = profile.with_display_name(name);
    }
    Ok(ParsedProfile { profile, warnings })
}

pub(crate) fn parse_publication(
    item: &Value,
    at: &str,
    warnings: &mut Vec<String>,
) -> Result<Publication, IngestError> {
    let obj = item
        .as_object()
        .ok_or_else(|| malformed(at, "expected an object"))?;
    warn_unknown(obj, PUB_FIELDS, at, warnings);
    let field = |key: &str| {
        obj.get(key)
            .ok_or_else(|| malformed(format!("{at}.{key}"), "missing field"))
    };

    let id = field("id")?
        .as_str()
        .ok_or_else(|| malformed(format!("{at}.id"), "expected a string"))?;
    let invalid = |reason: String| IngestError::InvalidPublication {
        at: at.to_owned(),
        id: id.to_owned(),
        reason,
    };

    let citations_value = field("citations")?;
    let citations = match citations_value.as_u64() {
        Some(c) => c,
        None if citations_value.as_i64().is_some_and(|c| c < 0) => {
            return Err(invalid("citations must be non-negative".into()))
        }
        None => {
            return Err(malformed(
                format!("{at}.citations"),
                "expected a non-negative integer",
            ))
        }
    };
    let impact_factor = field("impact_factor")?
        .as_f64()
        .ok_or_else(|| malformed(format!("{at}.impact_factor"), "expected a number"))?;

    let mut publication = Publication::new(id, citations, impact_factor).map_err(|e| match e {
        crate::error::MetricError::InvalidPublication { reason, .. } => invalid(reason),
        other => invalid(other.to_string()),
    })?;
    if let Some(v) = optional(obj, "title") {
        let title = v
            .as_str()
            .ok_or_else(|| malformed(format!("{at}.title"), "expected a string"))?;
        publication = publication.with_title(title);
    }
    if let Some(v) = optional(obj, "year") {
        let year = v
            .as_i64()
            .and_then(|y| i32::try_from(y).ok())
            .ok_or_else(|| malformed(format!("{at}.year"), "expected an integer year"))?;
        publication = publication.with_year(year);
    }
    Ok(publication)
}
