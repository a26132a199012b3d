//! Publication and author-profile types.
//!
//! Both types validate on construction, so a value that exists always has a
//! strictly positive, finite impact factor and a profile never holds two
//! publications with the same id.

use std::collections::HashSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::MetricError;

/// One paper: its citation count and the impact factor of its venue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Publication {
    id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    year: Option<i32>,
    citations: u64,
    impact_factor: f64,
}

impl Publication {
    pub fn new(
        id: impl Into<String>,
        citations: u64,
        impact_factor: f64,
    ) -> Result<Self, MetricError> {
        let id = id.into();
        if id.is_empty() {
            return Err(MetricError::InvalidPublication {
                id,
                reason: "id must not be empty".into(),
            });
        }
        if !impact_factor.is_finite() || impact_factor <= 0.0 {
            return Err(MetricError::InvalidPublication {
                id,
                reason: format!("impact factor must be positive and finite, got {impact_factor}"),
            });
        }
        Ok(Self {
            id,
            title: None,
            year: None,
            citations,
            impact_factor,
        })
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn with_year(mut self, year: i32) -> Self {
        self.year = Some(year);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn title(&self) -> Option<&str> {
        self.title.as_deref()
    }

    pub fn year(&self) -> Option<i32> {
        self.year
    }

    pub fn citations(&self) -> u64 {
        self.citations
    }

    pub fn impact_factor(&self) -> f64 {
        self.impact_factor
    }

    /// Citations per unit of venue impact factor.
    pub fn ratio(&self) -> f64 {
        self.citations as f64 / self.impact_factor
    }

    pub(crate) fn add_citations(&mut self, count: u64) -> Option<u64> {
        self.citations = self.citations.checked_add(count)?;
        Some(self.citations)
    }

    /// Copy with citations multiplied by `citation_factor` and the impact
    /// factor multiplied by `impact_factor_factor`.
    pub fn scaled(
        &self,
        citation_factor: u64,
        impact_factor_factor: f64,
    ) -> Result<Self, MetricError> {
        let citations = self.citations.checked_mul(citation_factor).ok_or_else(|| {
            MetricError::InvalidPublication {
                id: self.id.clone(),
                reason: "citation count overflow".into(),
            }
        })?;
        let mut out = Publication::new(
            self.id.clone(),
            citations,
            self.impact_factor * impact_factor_factor,
        )?;
        out.title = self.title.clone();
        out.year = self.year;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    LocalFile,
    RemoteCatalog,
}

/// Where a profile came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retrieved_at: Option<DateTime<Utc>>,
    /// File path or request URL.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    /// What the `impact_factor` column actually holds when it is not a
    /// journal impact factor (e.g. a catalog's venue citedness).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impact_factor_basis: Option<String>,
}

impl Provenance {
    pub fn local_file(location: impl Into<String>) -> Self {
        Self {
            kind: SourceKind::LocalFile,
            retrieved_at: None,
            location: Some(location.into()),
            impact_factor_basis: None,
        }
    }
}

impl Default for Provenance {
    fn default() -> Self {
        Self {
            kind: SourceKind::LocalFile,
            retrieved_at: None,
            location: None,
            impact_factor_basis: None,
        }
    }
}

/// An author's publication list. May be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorProfile {
    author_id: String,
    display_name: Option<String>,
    publications: Vec<Publication>,
    source: Provenance,
}

impl AuthorProfile {
    pub fn new(
        author_id: impl Into<String>,
        publications: Vec<Publication>,
    ) -> Result<Self, MetricError> {
        let mut seen = HashSet::with_capacity(publications.len());
        for p in &publications {
            if !seen.insert(p.id()) {
                return Err(MetricError::DuplicatePublication(p.id().to_owned()));
            }
        }
        Ok(Self {
            author_id: author_id.into(),
            display_name: None,
            publications,
            source: Provenance::default(),
        })
    }

    pub fn empty(author_id: impl Into<String>) -> Self {
        Self {
            author_id: author_id.into(),
            display_name: None,
            publications: Vec::new(),
            source: Provenance::default(),
        }
    }

    pub fn with_display_name(mut self, name: impl Into<String>) -> Self {
        self.display_name = Some(name.into());
        self
    }

    pub fn with_source(mut self, source: Provenance) -> Self {
        self.source = source;
        self
    }

    pub fn author_id(&self) -> &str {
        &self.author_id
    }

    pub fn display_name(&self) -> Option<&str> {
        self.display_name.as_deref()
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn source(&self) -> &Provenance {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Publication> {
        self.publications.iter().find(|p| p.id() == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.get(id).is_some()
    }

    pub fn push(&mut self, publication: Publication) -> Result<(), MetricError> {
        if self.contains(publication.id()) {
            return Err(MetricError::DuplicatePublication(
                publication.id().to_owned(),
            ));
        }
        self.publications.push(publication);
        Ok(())
    }

    /// Copy of this profile without the publication `id`.
    pub fn without(&self, id: &str) -> Result<Self, MetricError> {
        let pos = self
            .publications
            .iter()
            .position(|p| p.id() == id)
            .ok_or_else(|| MetricError::UnknownPublication(id.to_owned()))?;
        let mut out = self.clone();
        out.publications.remove(pos);
        Ok(out)
    }

    pub(crate) fn publication_mut(&mut self, id: &str) -> Option<&mut Publication> {
        self.publications.iter_mut().find(|p| p.id() == id)
    }

    /// Rebuild with the same metadata but a different publication list.
    pub fn with_publications(&self, publications: Vec<Publication>) -> Result<Self, MetricError> {
        Ok(AuthorProfile::new(self.author_id.clone(), publications)?
            .with_source(self.source.clone())
            .maybe_named(self.display_name.clone()))
    }

    fn maybe_named(mut self, name: Option<String>) -> Self {
        self.display_name = name;
        self
    }
}
