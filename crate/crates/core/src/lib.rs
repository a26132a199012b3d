//! Citation-impact indicators built on the ratio between a paper's citations
//! and the impact factor of the venue it appeared in.
//!
//! The crate computes the h-index and the u-index of an author profile,
//! flags four author-level publication anomalies, replays career event logs
//! to observe how the indices move, and loads profiles from CSV/JSON files or
//! a remote scholarly catalog.
//!
//! ```
//! use uindex_core::{compute_u_index, AuthorProfile, Publication};
//!
//! let profile = AuthorProfile::new(
//!     "author-d",
//!     vec![
//!         Publication::new("pub1", 2400, 3.56).unwrap(),
//!         Publication::new("pub2", 780, 3.48).unwrap(),
//!     ],
//! )
//! .unwrap();
//! let report = compute_u_index(&profile, None).unwrap();
//! assert_eq!(report.u_index, 1);
//! ```

pub mod anomaly;
pub mod batch;
pub mod dynamics;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod model;

pub use anomaly::{detect_anomalies, AnomalyCategory, AnomalyConfig, AnomalyFinding, Threshold};
pub use batch::Execution;
pub use dynamics::{replay, CareerEvent, EventKind, Trajectory, TrajectoryPoint};
pub use error::{AnomalyError, MetricError, ReplayError};
pub use metrics::{
    compute_cif, compute_h_index, compute_u_index, compute_u_index_with, leave_one_out,
    rank_by_citations, CifSource, LeaveOneOut, MetricReport, RankedEntry, RankedList, TieBreak,
    DEFAULT_EPSILON,
};
pub use model::{AuthorProfile, Provenance, Publication, SourceKind};
