//! Career event logs.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "events": [
//!     { "sequence_no": 1, "kind": "add_citations", "publication_id": "A", "count": 100 },
//!     { "sequence_no": 2, "kind": "add_publication",
//!       "publication": { "id": "C", "citations": 0, "impact_factor": 2.1 } }
//!   ]
//! }
//! ```
//!
//! A bare array of events and an empty (whitespace-only) file are accepted
//! too; the latter is an empty log.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{CareerEvent, EventKind};

use super::profile_json::{parse_publication, SCHEMA_VERSION};
use super::IngestError;

#[derive(Deserialize, Serialize)]
struct RawEvent {
    sequence_no: u64,
    #[serde(flatten)]
    kind: RawKind,
}

#[derive(Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawKind {
    AddPublication { publication: Value },
    AddCitations { publication_id: String, count: u64 },
}

pub fn parse_events(bytes: &[u8]) -> Result<Vec<CareerEvent>, IngestError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Ok(Vec::new());
    }
    let malformed = |path: &str, reason: String| IngestError::Malformed {
        path: path.to_owned(),
        reason,
    };
    let root: Value = serde_json::from_slice(bytes).map_err(|e| malformed("$", e.to_string()))?;
    let list = match root {
        Value::Array(_) => root,
        Value::Object(mut obj) => {
            let version = obj
                .get("schema_version")
                .and_then(Value::as_i64)
                .ok_or_else(|| malformed("schema_version", "missing or not an integer".into()))?;
            if version != SCHEMA_VERSION {
                return Err(IngestError::SchemaVersionUnsupported(version));
            }
            obj.remove("events")
                .ok_or_else(|| malformed("events", "missing field".into()))?
        }
        _ => {
            return Err(malformed(
                "$",
                "expected an object or an array of events".into(),
            ))
        }
    };
    let items = list
        .as_array()
        .ok_or_else(|| malformed("events", "expected an array".into()))?;
    let mut raw = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let ev: RawEvent = serde_json::from_value(item.clone())
            .map_err(|e| malformed(&format!("events[{i}]"), e.to_string()))?;
        raw.push(ev);
    }

    let mut warnings = Vec::new();
    raw.into_iter()
        .enumerate()
        .map(|(i, ev)| {
            let kind = match ev.kind {
                RawKind::AddCitations {
                    publication_id,
                    count,
                } => {
                    if count == 0 {
                        return Err(IngestError::InvalidEvent {
                            sequence_no: ev.sequence_no,
                            reason: "citation count must be at least 1".into(),
                        });
                    }
                    EventKind::AddCitations {
                        publication_id,
                        count,
                    }
                }
                RawKind::AddPublication { publication } => {
                    let at = format!("events[{i}].publication");
                    let p = parse_publication(&publication, &at, &mut warnings).map_err(|e| {
                        IngestError::InvalidEvent {
                            sequence_no: ev.sequence_no,
                            reason: e.to_string(),
                        }
                    })?;
                    EventKind::AddPublication(p)
                }
            };
            Ok(CareerEvent {
                sequence_no: ev.sequence_no,
                kind,
            })
        })
        .collect()
}

pub fn serialize_events(events: &[CareerEvent]) -> String {
    let raw: Vec<RawEvent> = events
        .iter()
        .map(|e| RawEvent {
            sequence_no: e.sequence_no,
            kind: match &e.kind {
                EventKind::AddPublication(p) => RawKind::AddPublication {
                    publication: serde_json::to_value(p).expect("publication serializes"),
                },
                EventKind::AddCitations {
                    publication_id,
                    count,
                } => RawKind::AddCitations {
                    publication_id: publication_id.clone(),
                    count: *count,
                },
            },
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "events": raw,
    }))
    .expect("events serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Publication;

    #[test]
    fn parses_both_kinds() {
        let text = br#"{"schema_version":1,"events":[
            {"sequence_no":1,"kind":"add_citations","publication_id":"A","count":100},
            {"sequence_no":2,"kind":"add_publication","publication":{"id":"C","citations":0,"impact_factor":2.1}}
        ]}"#;
        let events = parse_events(text).unwrap();
        assert_eq!(events[0], CareerEvent::add_citations(1, "A", 100));
        assert_eq!(
            events[1],
            CareerEvent::add_publication(2, Publication::new("C", 0, 2.1).unwrap())
        );
    }

    #[test]
    fn empty_inputs_are_empty_logs() {
        assert!(parse_events(b"").unwrap().is_empty());
        assert!(parse_events(b" \n").unwrap().is_empty());
        assert!(parse_events(b"[]").unwrap().is_empty());
        assert!(parse_events(br#"{"schema_version":1,"events":[]}"#)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn invalid_publication_names_sequence_no() {
        let text = br#"[{"sequence_no":9,"kind":"add_publication","publication":{"id":"C","citations":0,"impact_factor":-1}}]"#;
        assert!(matches!(
            parse_events(text).unwrap_err(),
            IngestError::InvalidEvent { sequence_no: 9, .. }
        ));
    }

    #[test]
    fn zero_count_is_rejected() {
        let text = br#"[{"sequence_no":4,"kind":"add_citations","publication_id":"A","count":0}]"#;
        assert!(matches!(
            parse_events(text).unwrap_err(),
            IngestError::InvalidEvent { sequence_no: 4, .. }
        ));
    }

    #[test]
    fn round_trip() {
        let events = vec![
            CareerEvent::add_publication(
                1,
                Publication::new("X", 4, 0.75).unwrap().with_year(1999),
            ),
            CareerEvent::add_citations(2, "X", 3),
        ];
        assert_eq!(
            parse_events(serialize_events(&events).as_bytes()).unwrap(),
            events
        );
    }
}
