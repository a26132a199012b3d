//! Batch evaluation over many profiles, publications or event logs.
//!
//! Every function takes an [`Execution`] mode. `Parallel` fans the work out
//! over the rayon global pool when the `parallel` feature is enabled and
//! silently runs sequentially otherwise. Results are always returned in
//! input order, so both modes produce identical output.

use crate::anomaly::{detect_anomalies, AnomalyConfig, AnomalyFinding};
use crate::dynamics::{replay, CareerEvent, Trajectory};
use crate::error::{AnomalyError, MetricError, ReplayError};
use crate::metrics::{compute_u_index_with, leave_one_out, LeaveOneOut, MetricReport};
use crate::model::AuthorProfile;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether `Parallel` actually runs on multiple threads in this build.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Compute a report for every profile.
pub fn evaluate_profiles(
    profiles: &[AuthorProfile],
    cif_override: Option<f64>,
    epsilon: f64,
    exec: Execution,
) -> Vec<Result<MetricReport, MetricError>> {
    map_ordered(profiles, exec, |p| {
        compute_u_index_with(p, cif_override, epsilon)
    })
}

/// Compute reports and run anomaly detection for every profile.
pub fn detect_profiles(
    profiles: &[AuthorProfile],
    config: &AnomalyConfig,
    exec: Execution,
) -> Vec<Result<Vec<AnomalyFinding>, AnomalyError>> {
    map_ordered(profiles, exec, |p| {
        let report = crate::metrics::compute_u_index(p, None)
            .expect("no override and default epsilon cannot fail");
        detect_anomalies(p, &report, config)
    })
}

/// Leave-one-out for every publication in the profile, in input order.
pub fn leave_one_out_sweep(profile: &AuthorProfile, exec: Execution) -> Vec<LeaveOneOut> {
    let ids: Vec<&str> = profile.publications().iter().map(|p| p.id()).collect();
    map_ordered(&ids, exec, |id| {
        leave_one_out(profile, id).expect("id comes from the profile itself")
    })
}

/// Replay many independent `(initial, events)` logs.
pub fn replay_many(
    logs: &[(AuthorProfile, Vec<CareerEvent>)],
    exec: Execution,
) -> Vec<Result<Trajectory, ReplayError>> {
    map_ordered(logs, exec, |(initial, events)| replay(initial, events))
}
