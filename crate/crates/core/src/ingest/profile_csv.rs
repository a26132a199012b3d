//! CSV profiles: `id,title,year,citations,impact_factor`.
//!
//! `title` and `year` may be omitted or left empty. Impact factors accept a
//! decimal comma (`"4,15"`) as well as a decimal point.

use std::collections::HashSet;

use crate::model::{AuthorProfile, Publication};

use super::IngestError;

pub const CSV_HEADER: [&str; 5] = ["id", "title", "year", "citations", "impact_factor"];

struct Columns {
    id: usize,
    title: Option<usize>,
    year: Option<usize>,
    citations: usize,
    impact_factor: usize,
}

impl Columns {
    fn locate(headers: &csv::StringRecord) -> Result<Self, IngestError> {
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(name))
        };
        let required =
            |name: &str| find(name).ok_or_else(|| IngestError::MissingColumn(name.to_owned()));
        Ok(Self {
            id: required("id")?,
            title: find("title"),
            year: find("year"),
            citations: required("citations")?,
            impact_factor: required("impact_factor")?,
        })
    }
}

pub fn parse_csv(author_id: &str, bytes: &[u8]) -> Result<AuthorProfile, IngestError> {
    let text = std::str::from_utf8(bytes).map_err(|e| IngestError::MalformedRow {
        line: 1,
        reason: format!("not valid UTF-8: {e}"),
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.trim_start_matches('\u{feff}').as_bytes());

    let headers = reader.headers().map_err(|e| IngestError::MalformedRow {
        line: 1,
        reason: e.to_string(),
    })?;
    if headers.iter().all(|h| h.trim().is_empty()) {
        return Err(IngestError::MissingColumn("id".into()));
    }
    let cols = Columns::locate(headers)?;

    let mut seen = HashSet::new();
    let mut publications = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let field = |idx: usize, name: &str| {
            record
                .get(idx)
                .map(str::trim)
                .ok_or_else(|| IngestError::MalformedRow {
                    line,
                    reason: format!("missing field `{name}`"),
                })
        };
        let optional = |idx: Option<usize>| {
            idx.and_then(|i| record.get(i))
                .map(str::trim)
                .filter(|s| !s.is_empty())
        };

        let id = field(cols.id, "id")?;
        if id.is_empty() {
            return Err(IngestError::MalformedRow {
                line,
                reason: "empty `id`".into(),
            });
        }
        let invalid = |reason: String| IngestError::InvalidPublication {
            at: format!("line {line}"),
            id: id.to_owned(),
            reason,
        };

        let citations =
            parse_citations(field(cols.citations, "citations")?).map_err(|r| match r {
                CountError::Negative => invalid("citations must be non-negative".into()),
                CountError::NotAnInteger(raw) => IngestError::MalformedRow {
                    line,
                    reason: format!("`citations` is not a non-negative integer: {raw:?}"),
                },
            })?;
        let raw_if = field(cols.impact_factor, "impact_factor")?;
        let impact_factor = parse_decimal(raw_if).ok_or_else(|| IngestError::MalformedRow {
            line,
            reason: format!("`impact_factor` is not a number: {raw_if:?}"),
        })?;
        let year = match optional(cols.year) {
            Some(raw) => Some(raw.parse::<i32>().map_err(|_| IngestError::MalformedRow {
                line,
                reason: format!("`year` is not an integer: {raw:?}"),
            })?),
            None => None,
        };

        let mut publication =
            Publication::new(id, citations, impact_factor).map_err(|e| match e {
                crate::error::MetricError::InvalidPublication { reason, .. } => invalid(reason),
                other => invalid(other.to_string()),
            })?;
        if let Some(title) = optional(cols.title) {
            publication = publication.with_title(title);
        }
        if let Some(year) = year {
            publication = publication.with_year(year);
        }
        if !seen.insert(id.to_owned()) {
            return Err(IngestError::DuplicateId {
                at: format!("line {line}"),
                id: id.to_owned(),
            });
        }
        publications.push(publication);
    }
    Ok(AuthorProfile::new(author_id, publications).expect("ids checked while parsing"))
}

pub(crate) enum CountError {
    Negative,
    NotAnInteger(String),
}

pub(crate) fn parse_citations(raw: &str) -> Result<u64, CountError> {
    if let Ok(v) = raw.parse::<u64>() {
        return Ok(v);
    }
    match raw.parse::<i64>() {
        Ok(v) if v < 0 => Err(CountError::Negative),
        _ => Err(CountError::NotAnInteger(raw.to_owned())),
    }
}

/// Parse a decimal written with either `.` or `,` as the separator.
pub fn parse_decimal(raw: &str) -> Option<f64> {
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    let normalized = if raw.contains('.') {
        raw.to_owned()
    } else {
        raw.replacen(',', ".", 1)
    };
    normalized.parse::<f64>().ok()
}

/// Render a profile as CSV with the canonical header.
pub fn write_csv(profile: &AuthorProfile) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for p in profile.publications() {
        writer
            .write_record([
                p.id().to_owned(),
                p.title().unwrap_or_default().to_owned(),
                p.year().map(|y| y.to_string()).unwrap_or_default(),
                p.citations().to_string(),
                p.impact_factor().to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,title,year,citations,impact_factor\n";

    #[test]
    fn comma_decimal_is_accepted() {
        let csv = format!("{HEADER}pub1,,,\"770\",\"4,15\"\n");
        let p = parse_csv("a", csv.as_bytes()).unwrap();
        let pub1 = &p.publications()[0];
        assert_eq!(pub1.citations(), 770);
        assert_eq!(pub1.impact_factor(), 4.15);
        assert_eq!(pub1.title(), None);
        assert_eq!(pub1.year(), None);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(parse_csv("a", HEADER.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn zero_impact_factor_is_invalid() {
        let csv = format!("{HEADER}p,,,3,0\n");
        let err = parse_csv("a", csv.as_bytes()).unwrap_err();
        assert!(
            matches!(err, IngestError::InvalidPublication { ref at, .. } if at == "line 2"),
            "{err}"
        );
    }

    #[test]
    fn negative_citations_are_invalid() {
        let csv = format!("{HEADER}p,,,-3,1.0\n");
        assert!(matches!(
            parse_csv("a", csv.as_bytes()).unwrap_err(),
            IngestError::InvalidPublication { .. }
        ));
    }

    #[test]
    fn bad_numbers_report_the_line() {
        let csv = format!("{HEADER}a,,,1,1\nb,,,x,1\n");
        match parse_csv("a", csv.as_bytes()).unwrap_err() {
            IngestError::MalformedRow { line, reason } => {
                assert_eq!(line, 3);
                assert!(reason.contains("citations"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_column_is_named() {
        let err = parse_csv("a", b"id,citations\np,1\n").unwrap_err();
        assert!(matches!(err, IngestError::MissingColumn(ref c) if c == "impact_factor"));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let csv = format!("{HEADER}p,,,1,1\np,,,2,1\n");
        assert!(matches!(
            parse_csv("a", csv.as_bytes()).unwrap_err(),
            IngestError::DuplicateId { .. }
        ));
    }

    #[test]
    fn optional_columns_may_be_absent_or_reordered() {
        let p = parse_csv("a", b"impact_factor,citations,id\n2.5,10,x\n").unwrap();
        assert_eq!(p.publications()[0].id(), "x");
        assert_eq!(p.publications()[0].impact_factor(), 2.5);
    }

    #[test]
    fn quoted_titles_survive_round_trip() {
        let csv = format!("{HEADER}p1,\"On \"\"quotes\"\", commas\",2020,5,1.5\n");
        let p = parse_csv("a", csv.as_bytes()).unwrap();
        assert_eq!(p.publications()[0].title(), Some("On \"quotes\", commas"));
        let again = parse_csv("a", write_csv(&p).as_bytes()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("4,15"), Some(4.15));
        assert_eq!(parse_decimal(" 39.22 "), Some(39.22));
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_decimal(""), None);
    }
}
