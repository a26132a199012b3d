//! Replay of career event logs.
//!
//! Each event either adds a publication or adds citations to an existing
//! one. After every event the indices are recomputed from scratch (CIF is
//! never overridden), so the trajectory shows how u moves: new papers can
//! raise it, while extra citations to papers already on the list raise CIF
//! and can push the prefix break earlier.

use serde::Serialize;

use crate::error::{ReplayError, ReplayErrorKind};
use crate::metrics::{compute_u_index_with, DEFAULT_EPSILON};
use crate::model::{AuthorProfile, Publication};

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    AddPublication(Publication),
    AddCitations { publication_id: String, count: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CareerEvent {
    pub sequence_no: u64,
    pub kind: EventKind,
}

impl CareerEvent {
    pub fn add_publication(sequence_no: u64, publication: Publication) -> Self {
        Self {
            sequence_no,
            kind: EventKind::AddPublication(publication),
        }
    }

    pub fn add_citations(sequence_no: u64, publication_id: impl Into<String>, count: u64) -> Self {
        Self {
            sequence_no,
            kind: EventKind::AddCitations {
                publication_id: publication_id.into(),
                count,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub sequence_no: u64,
    pub u_index: usize,
    pub h_index: usize,
    pub cif: f64,
    pub paper_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn u_series(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.u_index).collect()
    }

    pub fn h_series(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.h_index).collect()
    }
}

pub fn replay(initial: &AuthorProfile, events: &[CareerEvent]) -> Result<Trajectory, ReplayError> {
    replay_with(initial, events, DEFAULT_EPSILON)
}

/// Apply `events` in order, recording one point per event.
pub fn replay_with(
    initial: &AuthorProfile,
    events: &[CareerEvent],
    epsilon: f64,
) -> Result<Trajectory, ReplayError> {
    let mut profile = initial.clone();
    let mut points = Vec::with_capacity(events.len());
    let mut previous: Option<u64> = None;

    for event in events {
        let fail = |kind| ReplayError {
            sequence_no: event.sequence_no,
            kind,
        };
        if let Some(prev) = previous {
            if event.sequence_no <= prev {
                return Err(fail(ReplayErrorKind::OutOfOrder { previous: prev }));
            }
        }
        previous = Some(event.sequence_no);

        apply(&mut profile, &event.kind).map_err(fail)?;

        let report = compute_u_index_with(&profile, None, epsilon)
            .map_err(|e| fail(ReplayErrorKind::Metric(e)))?;
        points.push(TrajectoryPoint {
            sequence_no: event.sequence_no,
            u_index: report.u_index,
            h_index: report.h_index,
            cif: report.cif,
            paper_count: report.paper_count,
        });
    }
    Ok(Trajectory { points })
}

fn apply(profile: &mut AuthorProfile, kind: &EventKind) -> Result<(), ReplayErrorKind> {
    match kind {
        EventKind::AddPublication(p) => profile
            .push(p.clone())
            .map_err(|_| ReplayErrorKind::DuplicatePublication(p.id().to_owned())),
        EventKind::AddCitations {
            publication_id,
            count,
        } => {
            if *count == 0 {
                return Err(ReplayErrorKind::ZeroCitations);
            }
            let p = profile
                .publication_mut(publication_id)
                .ok_or_else(|| ReplayErrorKind::UnknownPublication(publication_id.clone()))?;
            p.add_citations(*count)
                .map(|_| ())
                .ok_or_else(|| ReplayErrorKind::Overflow(publication_id.clone()))
        }
    }
}
