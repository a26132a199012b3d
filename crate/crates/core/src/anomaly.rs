//! Threshold heuristics for four author-level publication anomalies.
//!
//! Each rule looks at the ranked publication list together with the CIF
//! threshold of a [`MetricReport`]:
//!
//! * **Senior author**: a paper below CIF in a venue whose IF is moderately
//!   above the profile's mean IF, with at most median citations.
//! * **Influential journal**: a paper below CIF in a venue whose IF is far
//!   above the profile's mean IF. Takes precedence over senior author.
//! * **Large group collaboration**: the counted prefix ends in a steep
//!   citation cliff; the papers above the cliff are implicated.
//! * **Senior co-author**: two papers in venues with the same IF whose
//!   citation counts differ by a large factor, one above CIF and one below.
//!
//! Findings never change the computed indices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::AnomalyError;
use crate::metrics::{MetricReport, RankedEntry, RankedList, DEFAULT_EPSILON};
use crate::model::AuthorProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AnomalyCategory {
    SeniorAuthor,
    LargeGroupCollaboration,
    SeniorCoAuthor,
    InfluentialJournal,
}

impl AnomalyCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            AnomalyCategory::SeniorAuthor => "SeniorAuthor",
            AnomalyCategory::LargeGroupCollaboration => "LargeGroupCollaboration",
            AnomalyCategory::SeniorCoAuthor => "SeniorCoAuthor",
            AnomalyCategory::InfluentialJournal => "InfluentialJournal",
        }
    }
}

impl std::fmt::Display for AnomalyCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyFinding {
    pub category: AnomalyCategory,
    /// Implicated publications in rank order.
    pub publication_ids: Vec<String>,
    pub measurements: BTreeMap<String, f64>,
    pub explanation: String,
}

/// Rule thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnomalyConfig {
    /// Lower edge of the senior-author IF band, as a multiple of mean IF.
    pub senior_if_factor: f64,
    /// IF multiple of the mean at or above which a venue is "influential".
    pub influential_if_factor: f64,
    /// Minimum citation drop factor across the end of the counted prefix.
    pub cliff_ratio: f64,
    /// Minimum citation factor between two same-IF papers.
    pub pair_citation_ratio: f64,
    /// Absolute IF difference under which two venues count as the same.
    pub pair_if_tolerance: f64,
}

impl Default for AnomalyConfig {
    fn default() -> Self {
        Self {
            senior_if_factor: 1.25,
            influential_if_factor: 3.0,
            cliff_ratio: 10.0,
            pair_citation_ratio: 5.0,
            pair_if_tolerance: 0.01,
        }
    }
}

impl AnomalyConfig {
    pub fn validate(&self) -> Result<(), AnomalyError> {
        let factors = [
            ("senior_if_factor", self.senior_if_factor),
            ("influential_if_factor", self.influential_if_factor),
            ("cliff_ratio", self.cliff_ratio),
            ("pair_citation_ratio", self.pair_citation_ratio),
        ];
        for (field, v) in factors {
            if !v.is_finite() || v <= 1.0 {
                return Err(AnomalyError::InvalidConfig {
                    field,
                    reason: format!("must be a finite number greater than 1, got {v}"),
                });
            }
        }
        if !self.pair_if_tolerance.is_finite() || self.pair_if_tolerance < 0.0 {
            return Err(AnomalyError::InvalidConfig {
                field: "pair_if_tolerance",
                reason: format!(
                    "must be finite and non-negative, got {}",
                    self.pair_if_tolerance
                ),
            });
        }
        Ok(())
    }
}

/// CIF value plus the comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub cif: f64,
    pub epsilon: f64,
}

impl Threshold {
    pub fn new(cif: f64) -> Self {
        Self {
            cif,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn of(report: &MetricReport) -> Self {
        Self {
            cif: report.cif,
            epsilon: report.epsilon,
        }
    }

    pub fn satisfied_by(&self, ratio: f64) -> bool {
        !self.violated_by(ratio)
    }

    pub fn violated_by(&self, ratio: f64) -> bool {
        ratio < self.cif - self.epsilon
    }
}

/// Run all four rules against `report`'s ranking and CIF.
pub fn detect_anomalies(
    profile: &AuthorProfile,
    report: &MetricReport,
    config: &AnomalyConfig,
) -> Result<Vec<AnomalyFinding>, AnomalyError> {
    config.validate()?;
    check_report_matches(profile, report)?;

    let ranked = &report.ranked;
    let threshold = Threshold::of(report);
    let mut findings = Vec::new();
    findings.extend(rule_influential_journal(ranked, threshold, config));
    findings.extend(rule_senior_author(ranked, threshold, config));
    findings.extend(rule_large_group(ranked, threshold, config));
    findings.extend(rule_senior_coauthor(ranked, threshold, config));

    let rank_key = |f: &AnomalyFinding| -> Vec<usize> {
        f.publication_ids
            .iter()
            .filter_map(|id| ranked.position_of(id))
            .collect()
    };
    findings.sort_by_cached_key(|f| (rank_key(f), f.category));
    Ok(findings)
}

fn check_report_matches(
    profile: &AuthorProfile,
    report: &MetricReport,
) -> Result<(), AnomalyError> {
    let from_profile: BTreeSet<&str> = profile.publications().iter().map(|p| p.id()).collect();
    let from_report: BTreeSet<&str> = report.ranked.iter().map(|e| e.id.as_str()).collect();
    if from_profile != from_report || report.ranked.len() != profile.len() {
        let missing: Vec<_> = from_profile.difference(&from_report).collect();
        let extra: Vec<_> = from_report.difference(&from_profile).collect();
        return Err(AnomalyError::MismatchedReport(format!(
            "missing from report: {missing:?}; not in profile: {extra:?}"
        )));
    }
    for e in report.ranked.iter() {
        let p = profile.get(&e.id).expect("id sets are equal");
        if p.citations() != e.citations || p.impact_factor() != e.impact_factor {
            return Err(AnomalyError::MismatchedReport(format!(
                "publication `{}` has different C or IF in the report",
                e.id
            )));
        }
    }
    Ok(())
}

fn mean_impact_factor(ranked: &RankedList) -> Option<f64> {
    if ranked.is_empty() {
        return None;
    }
    Some(ranked.iter().map(|e| e.impact_factor).sum::<f64>() / ranked.len() as f64)
}

fn median_citations(ranked: &RankedList) -> Option<f64> {
    let mut cs: Vec<u64> = ranked.iter().map(|e| e.citations).collect();
    if cs.is_empty() {
        return None;
    }
    cs.sort_unstable();
    let n = cs.len();
    Some(if n % 2 == 1 {
        cs[n / 2] as f64
    } else {
        (cs[n / 2 - 1] as f64 + cs[n / 2] as f64) / 2.0
    })
}

/// Citation quotient with the denominator floored at one citation.
fn citation_factor(high: u64, low: u64) -> f64 {
    high as f64 / low.max(1) as f64
}

/// Below-CIF papers in a venue with IF in `[α·mean, β·mean)` and at most
/// median citations.
pub fn rule_senior_author(
    ranked: &RankedList,
    threshold: Threshold,
    config: &AnomalyConfig,
) -> Vec<AnomalyFinding> {
    let (Some(mean_if), Some(median_c)) = (mean_impact_factor(ranked), median_citations(ranked))
    else {
        return Vec::new();
    };
    ranked
        .iter()
        .filter(|e| threshold.violated_by(e.ratio))
        .filter(|e| {
            let if_ratio = e.impact_factor / mean_if;
            if_ratio >= config.senior_if_factor
                && if_ratio < config.influential_if_factor
                && e.citations as f64 <= median_c
        })
        .map(|e| {
            let if_ratio = e.impact_factor / mean_if;
            AnomalyFinding {
                category: AnomalyCategory::SeniorAuthor,
                publication_ids: vec![e.id.clone()],
                measurements: BTreeMap::from([
                    ("ratio".to_owned(), e.ratio),
                    ("cif".to_owned(), threshold.cif),
                    ("if_ratio".to_owned(), if_ratio),
                    ("citations".to_owned(), e.citations as f64),
                    ("median_citations".to_owned(), median_c),
                ]),
                explanation: format!(
                    "{} has C/IF {:.2} below CIF {:.2} in a venue with IF {:.2} ({:.2}x the mean IF {:.2}) and only {} citations (median {:.1})",
                    e.id, e.ratio, threshold.cif, e.impact_factor, if_ratio, mean_if, e.citations, median_c
                ),
            }
        })
        .collect()
}

/// Below-CIF papers in a venue with IF at least `β·mean`.
pub fn rule_influential_journal(
    ranked: &RankedList,
    threshold: Threshold,
    config: &AnomalyConfig,
) -> Vec<AnomalyFinding> {
    let Some(mean_if) = mean_impact_factor(ranked) else {
        return Vec::new();
    };
    ranked
        .iter()
        .filter(|e| threshold.violated_by(e.ratio))
        .filter(|e| e.impact_factor / mean_if >= config.influential_if_factor)
        .map(|e| {
            let if_ratio = e.impact_factor / mean_if;
            AnomalyFinding {
                category: AnomalyCategory::InfluentialJournal,
                publication_ids: vec![e.id.clone()],
                measurements: BTreeMap::from([
                    ("ratio".to_owned(), e.ratio),
                    ("cif".to_owned(), threshold.cif),
                    ("if_ratio".to_owned(), if_ratio),
                ]),
                explanation: format!(
                    "{} has C/IF {:.2} below CIF {:.2} in a venue with IF {:.2} ({:.2}x the mean IF {:.2})",
                    e.id, e.ratio, threshold.cif, e.impact_factor, if_ratio, mean_if
                ),
            }
        })
        .collect()
}

/// A citation cliff of at least `γ` right where the counted prefix ends.
///
/// The cliff position `j` must be the last satisfying entry with the first
/// violator directly after it, which pins it to the end of the prefix.
pub fn rule_large_group(
    ranked: &RankedList,
    threshold: Threshold,
    config: &AnomalyConfig,
) -> Vec<AnomalyFinding> {
    let entries = &ranked.entries;
    let Some(break_at) = entries.iter().position(|e| threshold.violated_by(e.ratio)) else {
        return Vec::new();
    };
    if break_at == 0 {
        return Vec::new();
    }
    let (above, below): (&RankedEntry, &RankedEntry) = (&entries[break_at - 1], &entries[break_at]);
    let cliff = citation_factor(above.citations, below.citations);
    if cliff < config.cliff_ratio {
        return Vec::new();
    }
    let cluster: Vec<String> = entries[..break_at].iter().map(|e| e.id.clone()).collect();
    let explanation = format!(
        "citations drop {:.1}x from {} ({}) to {} ({}) where C/IF falls below CIF {:.2}; ranks 1-{} form the inflated cluster",
        cliff, above.id, above.citations, below.id, below.citations, threshold.cif, break_at
    );
    vec![AnomalyFinding {
        category: AnomalyCategory::LargeGroupCollaboration,
        publication_ids: cluster,
        measurements: BTreeMap::from([
            ("citation_cliff_ratio".to_owned(), cliff),
            ("cif".to_owned(), threshold.cif),
            ("cliff_rank".to_owned(), break_at as f64),
        ]),
        explanation,
    }]
}

/// Same-IF pairs where the above-CIF paper out-cites the below-CIF one by
/// at least `δ`.
pub fn rule_senior_coauthor(
    ranked: &RankedList,
    threshold: Threshold,
    config: &AnomalyConfig,
) -> Vec<AnomalyFinding> {
    let mut out = Vec::new();
    let (good, bad): (Vec<&RankedEntry>, Vec<&RankedEntry>) =
        ranked.iter().partition(|e| threshold.satisfied_by(e.ratio));
    for p in &good {
        for q in &bad {
            let if_gap = (p.impact_factor - q.impact_factor).abs();
            if if_gap > config.pair_if_tolerance + DEFAULT_EPSILON {
                continue;
            }
            let factor = citation_factor(p.citations, q.citations);
            if factor < config.pair_citation_ratio {
                continue;
            }
            let mut ids = vec![p.id.clone(), q.id.clone()];
            if ranked.position_of(&q.id) < ranked.position_of(&p.id) {
                ids.reverse();
            }
            out.push(AnomalyFinding {
                category: AnomalyCategory::SeniorCoAuthor,
                publication_ids: ids,
                measurements: BTreeMap::from([
                    ("pair_citation_ratio".to_owned(), factor),
                    ("if_difference".to_owned(), if_gap),
                    ("satisfying_ratio".to_owned(), p.ratio),
                    ("violating_ratio".to_owned(), q.ratio),
                    ("cif".to_owned(), threshold.cif),
                ]),
                explanation: format!(
                    "{} and {} share a venue IF of about {:.2} but {} has {:.1}x the citations; C/IF {:.2} vs {:.2} against CIF {:.2}",
                    p.id, q.id, p.impact_factor, p.id, factor, p.ratio, q.ratio, threshold.cif
                ),
            });
        }
    }
    out
}
