//! Client for a remote scholarly catalog with an OpenAlex-style REST API.
//!
//! Three endpoints are used:
//!
//! * `GET {base}/authors/{id}`: existence check and display name
//! * `GET {base}/works?filter=author.id:{id}&per-page=N&cursor=C`: cursor-paged works
//! * `GET {base}/sources/{id}`: venue summary stats
//!
//! The catalog publishes no journal impact factor. The venue's two-year mean
//! citedness (`summary_stats.2yr_mean_citedness`) stands in for it, and the
//! profile's provenance says so. Works without a venue, or whose venue has no
//! positive citedness, are skipped and reported in [`FetchOutcome::skipped`].
//!
//! Requests go through a [`Transport`] and a [`Clock`], so tests can replay
//! recorded responses and check pacing without a network or real sleeps.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;
use url::Url;

use crate::model::{AuthorProfile, Provenance, Publication, SourceKind};

use super::cache::{CacheError, ProfileCache};

pub const IMPACT_FACTOR_BASIS: &str =
    "venue two-year mean citedness (catalog proxy for journal impact factor)";
pub const DEFAULT_BASE_URL: &str = "https://api.openalex.org";

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogConfig {
    pub base_url: Url,
    /// Sent in the `User-Agent` and `From` headers.
    pub contact_email: Option<String>,
    /// Requests per second.
    pub rate_limit: f64,
    pub max_retries: u32,
    /// First retry delay; doubles on every further attempt.
    pub initial_backoff: Duration,
    pub timeout: Duration,
    pub page_size: u32,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        Self {
            base_url: Url::parse(DEFAULT_BASE_URL).expect("valid default URL"),
            contact_email: None,
            rate_limit: 5.0,
            max_retries: 3,
            initial_backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(30),
            page_size: 200,
        }
    }
}

impl CatalogConfig {
    pub fn new(base_url: Url) -> Self {
        Self {
            base_url,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.rate_limit.is_finite() || self.rate_limit <= 0.0 {
            return Err(format!(
                "rate_limit must be positive, got {}",
                self.rate_limit
            ));
        }
        if self.timeout.is_zero() {
            return Err("timeout must be positive".into());
        }
        if self.page_size == 0 {
            return Err("page_size must be positive".into());
        }
        if self.base_url.cannot_be_a_base() {
            return Err(format!("base_url `{}` cannot be a base URL", self.base_url));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("author `{author_id}` not found ({url})")]
    NotFound { author_id: String, url: String },

    #[error("rate limited by catalog after retries ({url})")]
    RateLimited { url: String },

    #[error("transport failure for {url}: {reason}")]
    Transport { url: String, reason: String },

    #[error("unexpected response from {url}: {reason}")]
    InvalidResponse { url: String, reason: String },

    #[error("invalid catalog config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Cache(#[from] CacheError),
}

impl FetchError {
    pub fn url(&self) -> Option<&str> {
        match self {
            FetchError::NotFound { url, .. }
            | FetchError::RateLimited { url }
            | FetchError::Transport { url, .. }
            | FetchError::InvalidResponse { url, .. } => Some(url),
            FetchError::InvalidConfig(_) | FetchError::Cache(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    NoVenue,
    NoVenueMetric,
    MissingCitationCount,
    DuplicateWork,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedWork {
    pub work_id: String,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FetchOutcome {
    pub profile: AuthorProfile,
    pub skipped: Vec<SkippedWork>,
}

// ---------------------------------------------------------------------------
// Transport

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
    pub retry_after: Option<Duration>,
}

impl HttpResponse {
    pub fn new(status: u16, body: impl Into<String>) -> Self {
        Self {
            status,
            body: body.into(),
            retry_after: None,
        }
    }
}

/// A blocking HTTP GET. `Err` means no response was received at all.
pub trait Transport: Send + Sync {
    fn get(&self, url: &Url, headers: &[(String, String)]) -> Result<HttpResponse, String>;
}

impl<T: Transport + ?Sized> Transport for &T {
    fn get(&self, url: &Url, headers: &[(String, String)]) -> Result<HttpResponse, String> {
        (**self).get(url, headers)
    }
}

impl<T: Transport + ?Sized> Transport for Box<T> {
    fn get(&self, url: &Url, headers: &[(String, String)]) -> Result<HttpResponse, String> {
        (**self).get(url, headers)
    }
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self { agent }
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &Url, headers: &[(String, String)]) -> Result<HttpResponse, String> {
        let mut req = self.agent.get(url.as_str());
        for (k, v) in headers {
            req = req.header(k.as_str(), v.as_str());
        }
        let resp = req.call().map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let retry_after = resp
            .headers()
            .get("retry-after")
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map(Duration::from_secs);
        let body = resp
            .into_body()
            .read_to_string()
            .map_err(|e| e.to_string())?;
        Ok(HttpResponse {
            status,
            body,
            retry_after,
        })
    }
}

/// On-disk form of one recorded exchange.
#[derive(Debug, Serialize, Deserialize)]
struct FixtureFile {
    url: String,
    status: u16,
    /// Either a JSON document or a raw string body.
    body: Value,
}

fn fixture_name(url: &str) -> String {
    let digest = Sha256::digest(url.as_bytes());
    format!("{}.json", &hex::encode(digest)[..16])
}

/// Serves canned responses keyed by exact URL.
#[derive(Debug, Default)]
pub struct FixtureTransport {
    responses: HashMap<String, HttpResponse>,
    requests: Mutex<Vec<String>>,
}

impl FixtureTransport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, url: impl Into<String>, response: HttpResponse) {
        self.responses.insert(url.into(), response);
    }

    /// Load every `*.json` fixture file in `dir`.
    pub fn from_dir(dir: &Path) -> std::io::Result<Self> {
        let mut out = Self::new();
        let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect();
        entries.sort();
        for path in entries {
            let text = std::fs::read_to_string(&path)?;
            let fixture: FixtureFile = serde_json::from_str(&text).map_err(|e| {
                std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("{}: {e}", path.display()),
                )
            })?;
            let body = match fixture.body {
                Value::String(s) => s,
                other => other.to_string(),
            };
            out.insert(fixture.url, HttpResponse::new(fixture.status, body));
        }
        Ok(out)
    }

    /// URLs requested so far, in order.
    pub fn requests(&self) -> Vec<String> {
        self.requests.lock().expect("fixture log lock").clone()
    }
}

impl Transport for FixtureTransport {
    fn get(&self, url: &Url, _headers: &[(String, String)]) -> Result<HttpResponse, String> {
        self.requests
            .lock()
            .expect("fixture log lock")
            .push(url.to_string());
        self.responses
            .get(url.as_str())
            .cloned()
            .ok_or_else(|| format!("no recorded fixture for {url}"))
    }
}

/// Passes requests through and writes every response into a fixture dir.
pub struct RecordingTransport<T> {
    inner: T,
    dir: PathBuf,
}

impl<T: Transport> RecordingTransport<T> {
    pub fn new(inner: T, dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { inner, dir })
    }
}

impl<T: Transport> Transport for RecordingTransport<T> {
    fn get(&self, url: &Url, headers: &[(String, String)]) -> Result<HttpResponse, String> {
        let resp = self.inner.get(url, headers)?;
        let body = serde_json::from_str::<Value>(&resp.body)
            .unwrap_or_else(|_| Value::String(resp.body.clone()));
        let fixture = FixtureFile {
            url: url.to_string(),
            status: resp.status,
            body,
        };
        let text = serde_json::to_string_pretty(&fixture).expect("fixture serializes");
        if let Err(e) = std::fs::write(self.dir.join(fixture_name(url.as_str())), text) {
            log::warn!("could not record fixture for {url}: {e}");
        }
        Ok(resp)
    }
}

// ---------------------------------------------------------------------------
// Clock and pacing

pub trait Clock: Send + Sync {
    /// Monotonic time since an arbitrary origin.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
    fn utc_now(&self) -> DateTime<Utc>;
}

pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        Self {
            origin: Instant::now(),
        }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d)
    }

    fn utc_now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// Virtual clock: `sleep` advances time instantly.
#[derive(Debug)]
pub struct ManualClock {
    elapsed: Mutex<Duration>,
    epoch: DateTime<Utc>,
}

impl ManualClock {
    pub fn new(epoch: DateTime<Utc>) -> Self {
        Self {
            elapsed: Mutex::new(Duration::ZERO),
            epoch,
        }
    }

    pub fn advance(&self, d: Duration) {
        *self.elapsed.lock().expect("clock lock") += d;
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Duration {
        *self.elapsed.lock().expect("clock lock")
    }

    fn sleep(&self, d: Duration) {
        self.advance(d);
    }

    fn utc_now(&self) -> DateTime<Utc> {
        self.epoch + chrono::Duration::from_std(self.now()).unwrap_or_default()
    }
}

impl<C: Clock + ?Sized> Clock for &C {
    fn now(&self) -> Duration {
        (**self).now()
    }
    fn sleep(&self, d: Duration) {
        (**self).sleep(d)
    }
    fn utc_now(&self) -> DateTime<Utc> {
        (**self).utc_now()
    }
}

/// Spaces requests at least `1 / rate` apart (rounded up to whole
/// nanoseconds). Any one-second window then holds at most `ceil(rate)`
/// requests, which is exactly `rate` for integer rates.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    last: Option<Duration>,
}

impl RateLimiter {
    pub fn new(rate_per_second: f64) -> Self {
        Self {
            interval: Duration::from_nanos((1e9 / rate_per_second).ceil() as u64),
            last: None,
        }
    }

    /// Block until the next request may go out, then claim the slot.
    pub fn acquire(&mut self, clock: &dyn Clock) {
        let now = clock.now();
        if let Some(last) = self.last {
            let ready = last + self.interval;
            if now < ready {
                clock.sleep(ready - now);
            }
        }
        self.last = Some(clock.now());
    }
}

// ---------------------------------------------------------------------------
// Client

pub struct CatalogClient<T, C> {
    config: CatalogConfig,
    transport: T,
    clock: C,
    limiter: Mutex<RateLimiter>,
}

impl CatalogClient<UreqTransport, SystemClock> {
    /// Client backed by real HTTP and the system clock.
    pub fn http(config: CatalogConfig) -> Result<Self, FetchError> {
        let transport = UreqTransport::new(config.timeout);
        Self::new(config, transport, SystemClock::default())
    }
}

/// Strip an `https://host/` prefix from catalog ids such as
/// `https://openalex.org/A123`.
pub fn short_id(id: &str) -> &str {
    id.trim_end_matches('/').rsplit('/').next().unwrap_or(id)
}

impl<T: Transport, C: Clock> CatalogClient<T, C> {
    pub fn new(config: CatalogConfig, transport: T, clock: C) -> Result<Self, FetchError> {
        config.validate().map_err(FetchError::InvalidConfig)?;
        let limiter = Mutex::new(RateLimiter::new(config.rate_limit));
        Ok(Self {
            config,
            transport,
            clock,
            limiter,
        })
    }

    pub fn config(&self) -> &CatalogConfig {
        &self.config
    }

    fn endpoint(&self, segments: &[&str]) -> Url {
        let mut url = self.config.base_url.clone();
        url.path_segments_mut()
            .expect("validated base URL")
            .pop_if_empty()
            .extend(segments);
        url
    }

    pub fn author_url(&self, author_id: &str) -> Url {
        self.endpoint(&["authors", short_id(author_id)])
    }

    pub fn works_url(&self, author_id: &str, cursor: &str) -> Url {
        let mut url = self.endpoint(&["works"]);
        url.query_pairs_mut()
            .append_pair("filter", &format!("author.id:{}", short_id(author_id)))
            .append_pair("per-page", &self.config.page_size.to_string())
            .append_pair("cursor", cursor);
        url
    }

    pub fn source_url(&self, source_id: &str) -> Url {
        self.endpoint(&["sources", short_id(source_id)])
    }

    fn headers(&self) -> Vec<(String, String)> {
        let agent = concat!("uindex/", env!("CARGO_PKG_VERSION"));
        let mut headers = vec![("Accept".to_owned(), "application/json".to_owned())];
        match &self.config.contact_email {
            Some(email) => {
                headers.push(("User-Agent".into(), format!("{agent} (mailto:{email})")));
                headers.push(("From".into(), email.clone()));
            }
            None => headers.push(("User-Agent".into(), agent.to_owned())),
        }
        headers
    }

    /// GET with pacing and retries. `Ok(None)` means 404.
    fn get_json(&self, url: &Url) -> Result<Option<Value>, FetchError> {
        let headers = self.headers();
        let mut attempt = 0u32;
        loop {
            self.limiter
                .lock()
                .expect("rate limiter lock")
                .acquire(&self.clock);
            let (err, retry_after) = match self.transport.get(url, &headers) {
                Ok(resp) if (200..300).contains(&resp.status) => {
                    let value = serde_json::from_str(&resp.body).map_err(|e| {
                        FetchError::InvalidResponse {
                            url: url.to_string(),
                            reason: e.to_string(),
                        }
                    })?;
                    return Ok(Some(value));
                }
                Ok(resp) if resp.status == 404 => return Ok(None),
                Ok(resp) if resp.status == 429 => (
                    FetchError::RateLimited {
                        url: url.to_string(),
                    },
                    resp.retry_after,
                ),
                Ok(resp) if resp.status >= 500 => (
                    FetchError::Transport {
                        url: url.to_string(),
                        reason: format!("HTTP {}", resp.status),
                    },
                    resp.retry_after,
                ),
                Ok(resp) => {
                    return Err(FetchError::Transport {
                        url: url.to_string(),
                        reason: format!("HTTP {}", resp.status),
                    })
                }
                Err(reason) => (
                    FetchError::Transport {
                        url: url.to_string(),
                        reason,
                    },
                    None,
                ),
            };
            if attempt >= self.config.max_retries {
                return Err(err);
            }
            let backoff = self
                .config
                .initial_backoff
                .saturating_mul(1 << attempt.min(16));
            let wait = retry_after.map_or(backoff, |r| r.max(backoff));
            log::debug!("retrying {url} in {wait:?} after: {err}");
            self.clock.sleep(wait);
            attempt += 1;
        }
    }

    pub fn fetch_author(&self, author_id: &str) -> Result<FetchOutcome, FetchError> {
        let author_id = short_id(author_id);
        let author_url = self.author_url(author_id);
        let author = self
            .get_json(&author_url)?
            .ok_or_else(|| FetchError::NotFound {
                author_id: author_id.to_owned(),
                url: author_url.to_string(),
            })?;
        let display_name = author
            .get("display_name")
            .and_then(Value::as_str)
            .map(str::to_owned);

        let mut venue_metric: HashMap<String, Option<f64>> = HashMap::new();
        let mut publications: Vec<Publication> = Vec::new();
        let mut skipped = Vec::new();
        let mut seen = std::collections::HashSet::new();

        let mut cursor = "*".to_owned();
        loop {
            let url = self.works_url(author_id, &cursor);
            let page = self.get_json(&url)?.ok_or_else(|| FetchError::NotFound {
                author_id: author_id.to_owned(),
                url: url.to_string(),
            })?;
            let results = page
                .get("results")
                .and_then(Value::as_array)
                .ok_or_else(|| FetchError::InvalidResponse {
                    url: url.to_string(),
                    reason: "missing `results` array".into(),
                })?;

            for work in results {
                let Some(raw_id) = work.get("id").and_then(Value::as_str) else {
                    return Err(FetchError::InvalidResponse {
                        url: url.to_string(),
                        reason: "work without `id`".into(),
                    });
                };
                let work_id = short_id(raw_id).to_owned();
                let skip = |reason| SkippedWork {
                    work_id: work_id.clone(),
                    reason,
                };
                if !seen.insert(work_id.clone()) {
                    skipped.push(skip(SkipReason::DuplicateWork));
                    continue;
                }
                let Some(citations) = work.get("cited_by_count").and_then(Value::as_u64) else {
                    skipped.push(skip(SkipReason::MissingCitationCount));
                    continue;
                };
                let Some(source_id) = work
                    .pointer("/primary_location/source/id")
                    .and_then(Value::as_str)
                    .map(|s| short_id(s).to_owned())
                else {
                    skipped.push(skip(SkipReason::NoVenue));
                    continue;
                };
                let metric = match venue_metric.get(&source_id) {
                    Some(m) => *m,
                    None => {
                        let m = self.venue_citedness(&source_id)?;
                        venue_metric.insert(source_id.clone(), m);
                        m
                    }
                };
                let Some(impact_factor) = metric else {
                    skipped.push(skip(SkipReason::NoVenueMetric));
                    continue;
                };
                let mut publication = Publication::new(work_id.clone(), citations, impact_factor)
                    .expect("metric filtered to positive finite values");
                if let Some(title) = work
                    .get("display_name")
                    .or_else(|| work.get("title"))
                    .and_then(Value::as_str)
                {
                    publication = publication.with_title(title);
                }
                if let Some(year) = work
                    .get("publication_year")
                    .and_then(Value::as_i64)
                    .and_then(|y| i32::try_from(y).ok())
                {
                    publication = publication.with_year(year);
                }
                publications.push(publication);
            }

            let next = page
                .pointer("/meta/next_cursor")
                .and_then(Value::as_str)
                .filter(|c| !c.is_empty());
            match next {
                Some(next) if !results.is_empty() && next != cursor => cursor = next.to_owned(),
                _ => break,
            }
        }

        let source = Provenance {
            kind: SourceKind::RemoteCatalog,
            retrieved_at: Some(self.clock.utc_now()),
            location: Some(author_url.to_string()),
            impact_factor_basis: Some(IMPACT_FACTOR_BASIS.to_owned()),
        };
        let mut profile = AuthorProfile::new(author_id, publications)
            .expect("duplicate works are skipped")
            .with_source(source);
        if let Some(name) = display_name {
            profile = profile.with_display_name(name);
        }
        Ok(FetchOutcome { profile, skipped })
    }

    fn venue_citedness(&self, source_id: &str) -> Result<Option<f64>, FetchError> {
        let url = self.source_url(source_id);
        Ok(self.get_json(&url)?.and_then(|v| {
            v.pointer("/summary_stats/2yr_mean_citedness")
                .and_then(Value::as_f64)
                .filter(|m| m.is_finite() && *m > 0.0)
        }))
    }

    /// Fetch and store into `cache`; returns the cache file path.
    pub fn fetch_into_cache(
        &self,
        author_id: &str,
        cache: &ProfileCache,
    ) -> Result<(FetchOutcome, PathBuf), FetchError> {
        let outcome = self.fetch_author(author_id)?;
        let path = cache.store(&outcome.profile)?;
        Ok((outcome, path))
    }
}

/// Fetch over real HTTP with the given config.
pub fn fetch_author(author_id: &str, config: CatalogConfig) -> Result<FetchOutcome, FetchError> {
    CatalogClient::http(config)?.fetch_author(author_id)
}
