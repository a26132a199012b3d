//! h-index, u-index and the CIF threshold.
//!
//! Publications are ranked by citation count. The u-index is the length of
//! the longest leading run of that ranking in which every paper's C/IF ratio
//! reaches the profile-wide CIF value (total citations over total impact
//! factor). The first paper that falls short ends the run; papers further
//! down never count, even if their ratio clears the threshold again.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::MetricError;
use crate::model::{AuthorProfile, Publication};

/// Absolute tolerance used when comparing a ratio against CIF.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// How publications with equal citation counts are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Equal C: higher C/IF first, then original input position.
    RatioDescThenInputOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    /// 1-based.
    pub rank: usize,
    pub id: String,
    pub citations: u64,
    pub impact_factor: f64,
    pub ratio: f64,
}

/// Publications sorted by citations, highest first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedList {
    pub entries: Vec<RankedEntry>,
    pub tie_break: TieBreak,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RankedEntry> {
        self.entries.iter()
    }

    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CifSource {
    Computed,
    Override,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub author_id: String,
    pub paper_count: usize,
    pub h_index: usize,
    pub u_index: usize,
    pub cif: f64,
    pub cif_source: CifSource,
    pub epsilon: f64,
    /// 1-based rank of the first paper with C/IF below CIF.
    pub first_violation_rank: Option<usize>,
    pub ranked: RankedList,
}

impl MetricReport {
    /// Whether the entry at 0-based `index` is part of the counted prefix.
    pub fn counts(&self, index: usize) -> bool {
        index < self.u_index
    }
}

/// Sort the profile's publications by citation count, highest first.
///
/// Equal counts are ordered by C/IF (higher first) and then by their
/// position in the input.
pub fn rank_by_citations(profile: &AuthorProfile) -> RankedList {
    rank_publications(profile.publications())
}

pub(crate) fn rank_publications(publications: &[Publication]) -> RankedList {
    let mut order: Vec<(usize, &Publication, f64)> = publications
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p, p.ratio()))
        .collect();
    order.sort_by(|a, b| {
        b.1.citations()
            .cmp(&a.1.citations())
            .then_with(|| b.2.partial_cmp(&a.2).unwrap_or(Ordering::Equal))
            .then_with(|| a.0.cmp(&b.0))
    });
    let entries = order
        .into_iter()
        .enumerate()
        .map(|(rank, (_, p, ratio))| RankedEntry {
            rank: rank + 1,
            id: p.id().to_owned(),
            citations: p.citations(),
            impact_factor: p.impact_factor(),
            ratio,
        })
        .collect();
    RankedList {
        entries,
        tie_break: TieBreak::RatioDescThenInputOrder,
    }
}

/// Total citations divided by total impact factor.
///
/// Equivalent to mean(C) / mean(IF).
pub fn compute_cif(profile: &AuthorProfile) -> Result<f64, MetricError> {
    cif_of(profile.publications()).ok_or(MetricError::EmptyProfile)
}

pub(crate) fn cif_of(publications: &[Publication]) -> Option<f64> {
    if publications.is_empty() {
        return None;
    }
    let (c, f) = publications.iter().fold((0.0_f64, 0.0_f64), |(c, f), p| {
        (c + p.citations() as f64, f + p.impact_factor())
    });
    Some(c / f)
}

pub fn compute_h_index(profile: &AuthorProfile) -> usize {
    h_index_of(profile.publications().iter().map(Publication::citations))
}

pub(crate) fn h_index_of(citations: impl Iterator<Item = u64>) -> usize {
    let mut counts: Vec<u64> = citations.collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts
        .iter()
        .enumerate()
        .take_while(|(i, &c)| c > *i as u64)
        .count()
}

/// Compute the full report with the default tolerance.
pub fn compute_u_index(
    profile: &AuthorProfile,
    cif_override: Option<f64>,
) -> Result<MetricReport, MetricError> {
    compute_u_index_with(profile, cif_override, DEFAULT_EPSILON)
}

pub fn compute_u_index_with(
    profile: &AuthorProfile,
    cif_override: Option<f64>,
    epsilon: f64,
) -> Result<MetricReport, MetricError> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(MetricError::InvalidEpsilon(epsilon));
    }
    let (cif, cif_source) = match cif_override {
        Some(v) if !v.is_finite() || v < 0.0 => return Err(MetricError::InvalidOverride(v)),
        Some(v) => (v, CifSource::Override),
        None => (
            cif_of(profile.publications()).unwrap_or(0.0),
            CifSource::Computed,
        ),
    };

    let ranked = rank_by_citations(profile);
    let first_violation = ranked.entries.iter().position(|e| e.ratio < cif - epsilon);
    let u_index = first_violation.unwrap_or(ranked.len());

    Ok(MetricReport {
        author_id: profile.author_id().to_owned(),
        paper_count: profile.len(),
        h_index: compute_h_index(profile),
        u_index,
        cif,
        cif_source,
        epsilon,
        first_violation_rank: first_violation.map(|i| i + 1),
        ranked,
    })
}

/// Reports for a profile with and without one publication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaveOneOut {
    pub excluded_id: String,
    pub with: MetricReport,
    pub without: MetricReport,
    /// `u(without) - u(with)`.
    pub delta_u: i64,
}

/// Drop `excluded_id`, recompute CIF on the reduced profile, and compare.
pub fn leave_one_out(
    profile: &AuthorProfile,
    excluded_id: &str,
) -> Result<LeaveOneOut, MetricError> {
    let reduced = profile.without(excluded_id)?;
    let with = compute_u_index(profile, None)?;
    let without = compute_u_index(&reduced, None)?;
    let delta_u = without.u_index as i64 - with.u_index as i64;
    Ok(LeaveOneOut {
        excluded_id: excluded_id.to_owned(),
        with,
        without,
        delta_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(rows: &[(&str, u64, f64)]) -> AuthorProfile {
        AuthorProfile::new(
            "t",
            rows.iter()
                .map(|&(id, c, f)| Publication::new(id, c, f).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn author_a() -> AuthorProfile {
        profile(&[
            ("pub1", 770, 4.15),
            ("pub2", 650, 3.84),
            ("pub3", 120, 6.15),
            ("pub4", 100, 1.86),
        ])
    }

    fn author_d_shuffled() -> AuthorProfile {
        profile(&[
            ("pub4", 1000, 3.12),
            ("pub6", 780, 3.48),
            ("pub1", 2400, 3.56),
            ("pub5", 850, 39.22),
            ("pub3", 1400, 2.88),
            ("pub2", 2200, 4.18),
        ])
    }

    #[test]
    fn ranks_author_d_by_citations() {
        let ranked = rank_by_citations(&author_d_shuffled());
        let ids: Vec<_> = ranked.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["pub1", "pub2", "pub3", "pub4", "pub5", "pub6"]);
        let cs: Vec<_> = ranked.iter().map(|e| e.citations).collect();
        assert_eq!(cs, [2400, 2200, 1400, 1000, 850, 780]);
        assert!(ranked.iter().enumerate().all(|(i, e)| e.rank == i + 1));
    }

    #[test]
    fn empty_profile_ranks_to_empty_list() {
        assert!(rank_by_citations(&AuthorProfile::empty("e")).is_empty());
    }

    #[test]
    fn equal_citations_prefer_higher_ratio() {
        let ranked = rank_by_citations(&profile(&[("if5", 10, 5.0), ("if2", 10, 2.0)]));
        assert_eq!(ranked.entries[0].id, "if2");
        assert_eq!(ranked.entries[1].id, "if5");
    }

    #[test]
    fn full_ties_keep_input_order() {
        let ranked = rank_by_citations(&profile(&[("b", 10, 2.0), ("a", 10, 2.0), ("c", 10, 2.0)]));
        let ids: Vec<_> = ranked.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["b", "a", "c"]);
    }

    #[test]
    fn cif_is_ratio_of_sums() {
        // 8630 / 56.44
        let cif = compute_cif(&author_d_shuffled()).unwrap();
        assert!((cif - 8630.0 / 56.44).abs() < 1e-12);
        assert!((cif - 152.90).abs() < 0.05);
        // 1640 / 16.0; the printed table uses 50 instead.
        assert!((compute_cif(&author_a()).unwrap() - 102.5).abs() < 1e-9);
        assert!((compute_cif(&profile(&[("p", 7, 7.0)])).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cif_of_empty_profile_is_an_error() {
        assert_eq!(
            compute_cif(&AuthorProfile::empty("e")).unwrap_err(),
            MetricError::EmptyProfile
        );
    }

    #[test]
    fn u_index_stops_at_first_violation() {
        let r = compute_u_index(&author_a(), Some(50.0)).unwrap();
        assert_eq!(r.u_index, 2);
        assert_eq!(r.first_violation_rank, Some(3));
        // pub4 clears 50 but sits after the break.
        assert!(r.ranked.entries[3].ratio >= 50.0);

        let r = compute_u_index(&author_d_shuffled(), Some(152.0)).unwrap();
        assert_eq!(r.u_index, 4);
        assert_eq!(r.first_violation_rank, Some(5));
        assert!(r.ranked.entries[5].ratio >= 152.0);
    }

    #[test]
    fn single_publication_equals_its_own_cif() {
        let r = compute_u_index(&profile(&[("p", 5, 1.0)]), None).unwrap();
        assert_eq!(r.cif, 5.0);
        assert_eq!(r.u_index, 1);
        assert_eq!(r.first_violation_rank, None);
    }

    #[test]
    fn empty_profile_metrics_are_zero() {
        let r = compute_u_index(&AuthorProfile::empty("e"), None).unwrap();
        assert_eq!((r.u_index, r.h_index, r.paper_count), (0, 0, 0));
        assert_eq!(r.cif, 0.0);
        assert_eq!(r.first_violation_rank, None);
    }

    #[test]
    fn equality_within_epsilon_counts() {
        // 1/3 * 3 is not exactly 1 in binary; the tolerance absorbs it.
        let p = profile(&[("a", 1, 1.0 / 3.0), ("b", 1, 1.0 / 3.0)]);
        let r = compute_u_index(&p, Some(3.0)).unwrap();
        assert_eq!(r.u_index, 2);
        let r = compute_u_index_with(&p, Some(3.0 + 1e-6), 0.0).unwrap();
        assert_eq!(r.u_index, 0);
    }

    #[test]
    fn rejects_bad_override_and_epsilon() {
        let p = author_a();
        assert!(matches!(
            compute_u_index(&p, Some(-1.0)),
            Err(MetricError::InvalidOverride(_))
        ));
        assert!(matches!(
            compute_u_index(&p, Some(f64::NAN)),
            Err(MetricError::InvalidOverride(_))
        ));
        assert!(matches!(
            compute_u_index_with(&p, None, -1.0),
            Err(MetricError::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn h_index_small_cases() {
        assert_eq!(compute_h_index(&author_d_shuffled()), 6);
        assert_eq!(compute_h_index(&AuthorProfile::empty("e")), 0);
        assert_eq!(
            compute_h_index(&profile(&[("a", 1, 1.0), ("b", 1, 1.0), ("c", 1, 1.0)])),
            1
        );
        assert_eq!(compute_h_index(&profile(&[("a", 0, 1.0)])), 0);
    }

    #[test]
    fn leave_one_out_single_publication() {
        let p = profile(&[("only", 3, 1.0)]);
        let loo = leave_one_out(&p, "only").unwrap();
        assert_eq!(loo.without.u_index, 0);
        assert_eq!(loo.with.u_index, 1);
        assert_eq!(loo.delta_u, -1);
    }

    #[test]
    fn leave_one_out_unknown_id() {
        assert_eq!(
            leave_one_out(&author_a(), "nope").unwrap_err(),
            MetricError::UnknownPublication("nope".into())
        );
    }
}
