use thiserror::Error;

/// Errors raised while building profiles or computing indices.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("invalid publication `{id}`: {reason}")]
    InvalidPublication { id: String, reason: String },

    #[error("duplicate publication id `{0}`")]
    DuplicatePublication(String),

    #[error("unknown publication id `{0}`")]
    UnknownPublication(String),

    #[error("profile has no publications")]
    EmptyProfile,

    #[error("invalid CIF override {0}: must be finite and non-negative")]
    InvalidOverride(f64),

    #[error("invalid epsilon {0}: must be finite and non-negative")]
    InvalidEpsilon(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnomalyError {
    #[error("report does not describe the analyzed profile: {0}")]
    MismatchedReport(String),

    #[error("invalid anomaly config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
}

/// A replay failure, tagged with the offending event.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("event {sequence_no}: {kind}")]
pub struct ReplayError {
    pub sequence_no: u64,
    pub kind: ReplayErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplayErrorKind {
    #[error("unknown publication `{0}`")]
    UnknownPublication(String),

    #[error("duplicate publication `{0}`")]
    DuplicatePublication(String),

    #[error("sequence number does not increase (previous was {previous})")]
    OutOfOrder { previous: u64 },

    #[error("citation count must be at least 1")]
    ZeroCitations,

    #[error("citation count overflow on `{0}`")]
    Overflow(String),

    #[error(transparent)]
    Metric(#[from] MetricError),
}
