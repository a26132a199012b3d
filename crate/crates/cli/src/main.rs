mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::warn;
use url::Url;

use uindex_core::ingest::catalog::{
    short_id, CatalogClient, CatalogConfig, FixtureTransport, RecordingTransport, SystemClock,
    Transport, UreqTransport, DEFAULT_BASE_URL,
};
use uindex_core::ingest::{load_profile, parse_events, CacheError, FetchError, ProfileCache};
use uindex_core::{
    compute_u_index, compute_u_index_with, detect_anomalies, replay, AnomalyConfig, AuthorProfile,
    DEFAULT_EPSILON,
};

use render::{OutputFormat, ReplayOutput, Snapshot};

const EXIT_INPUT: u8 = 2;
const EXIT_TRANSPORT: u8 = 3;
const EXIT_NOT_FOUND: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "uindex",
    version,
    about = "Compute u-index and h-index, flag publication anomalies, replay careers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank a profile and report its u-index, h-index and CIF.
    Compute {
        #[command(flatten)]
        source: ProfileSource,
        /// Use this CIF instead of computing it from the profile.
        #[arg(long, value_name = "DECIMAL")]
        cif_override: Option<f64>,
        /// Absolute tolerance when comparing C/IF against CIF.
        #[arg(long, value_name = "DECIMAL")]
        epsilon: Option<f64>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Run the anomaly rules on a profile.
    Detect {
        #[command(flatten)]
        source: ProfileSource,
        #[arg(long, value_name = "DECIMAL")]
        cif_override: Option<f64>,
        /// JSON file with rule thresholds; missing keys keep their defaults.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Apply a career event log and report the indices after every event.
    Replay {
        #[arg(long, value_name = "PATH")]
        initial: PathBuf,
        #[arg(long, value_name = "PATH")]
        events: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Download an author profile from the catalog into the local cache.
    Fetch {
        #[arg(long, value_name = "ID")]
        author: String,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Write rank and C/IF columns for external plotting.
    Plotdata {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_name = "DECIMAL")]
        cif_override: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ProfileInput {
    /// Profile file (.csv or .json).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Catalog author id; read from the cache, fetched on a miss.
    #[arg(long, value_name = "ID")]
    author: Option<String>,
}

#[derive(Debug, Args)]
struct ProfileSource {
    #[command(flatten)]
    input: ProfileInput,
    #[command(flatten)]
    catalog: CatalogArgs,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    /// Cache directory (default: $UINDEX_CACHE_DIR, then ~/.cache/uindex).
    #[arg(long, value_name = "PATH")]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_name = "URL", default_value = DEFAULT_BASE_URL)]
    catalog_url: Url,
    /// Contact address sent with catalog requests.
    #[arg(long, value_name = "EMAIL")]
    mailto: Option<String>,
    /// Maximum catalog requests per second.
    #[arg(long, value_name = "DECIMAL", default_value_t = 5.0)]
    rate_limit: f64,
    /// Serve catalog requests from recorded fixture files instead of the network.
    #[arg(long, value_name = "DIR", conflicts_with = "record_fixtures")]
    replay_fixtures: Option<PathBuf>,
    /// Save every catalog response as a fixture file in DIR.
    #[arg(long, value_name = "DIR")]
    record_fixtures: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

impl From<FetchError> for Failure {
    fn from(e: FetchError) -> Self {
        let code = match e {
            FetchError::NotFound { .. } => EXIT_NOT_FOUND,
            FetchError::RateLimited { .. }
            | FetchError::Transport { .. }
            | FetchError::InvalidResponse { .. } => EXIT_TRANSPORT,
            FetchError::InvalidConfig(_) | FetchError::Cache(_) => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Compute {
            source,
            cif_override,
            epsilon,
            format,
        } => {
            let profile = resolve_profile(&source)?;
            let report =
                compute_u_index_with(&profile, cif_override, epsilon.unwrap_or(DEFAULT_EPSILON))
                    .map_err(Failure::input)?;
            Ok(match format {
                OutputFormat::Table => render::report_table(&report),
                OutputFormat::Json => render::json(&report),
                OutputFormat::Csv => render::report_csv(&report),
            })
        }
        Command::Detect {
            source,
            cif_override,
            config,
            format,
        } => {
            let config = match config {
                Some(path) => read_config(&path)?,
                None => AnomalyConfig::default(),
            };
            let profile = resolve_profile(&source)?;
            let report = compute_u_index(&profile, cif_override).map_err(Failure::input)?;
            let findings = detect_anomalies(&profile, &report, &config).map_err(Failure::input)?;
            Ok(match format {
                OutputFormat::Table => render::findings_table(&report, &findings),
                OutputFormat::Json => render::json(&findings),
                OutputFormat::Csv => render::findings_csv(&findings),
            })
        }
        Command::Replay {
            initial,
            events,
            format,
        } => {
            let profile = read_profile(&initial)?;
            let bytes = std::fs::read(&events)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", events.display())))?;
            let events = parse_events(&bytes)
                .map_err(|e| Failure::input(format!("{}: {e}", events.display())))?;
            let start = compute_u_index(&profile, None).map_err(Failure::input)?;
            let trajectory = replay(&profile, &events).map_err(Failure::input)?;
            let output = ReplayOutput {
                initial: Snapshot::of(&start),
                points: trajectory.points,
            };
            Ok(match format {
                OutputFormat::Table => render::replay_table(&output),
                OutputFormat::Json => render::json(&output),
                OutputFormat::Csv => render::replay_csv(&output),
            })
        }
        Command::Fetch { author, catalog } => {
            let cache = ProfileCache::resolve(catalog.cache_dir.as_deref());
            let (_, path) = fetch_to_cache(&author, &catalog, &cache)?;
            Ok(format!("{}\n", path.display()))
        }
        Command::Plotdata {
            input,
            cif_override,
            out,
        } => {
            let profile = read_profile(&input)?;
            let report = compute_u_index(&profile, cif_override).map_err(Failure::input)?;
            std::fs::write(&out, render::plot_series(&report))
                .map_err(|e| Failure::input(format!("cannot write {}: {e}", out.display())))?;
            Ok(String::new())
        }
    }
}

fn read_profile(path: &Path) -> Result<AuthorProfile, Failure> {
    let parsed =
        load_profile(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        warn!("{}: {w}", path.display());
    }
    Ok(parsed.profile)
}

fn read_config(path: &Path) -> Result<AnomalyConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Parse a thresholds object, naming the offending key on failure.
fn parse_config(text: &str) -> Result<AnomalyConfig, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let object = value
        .as_object()
        .ok_or_else(|| "config must be a JSON object".to_owned())?;
    let mut config = AnomalyConfig::default();
    for (key, v) in object {
        let slot = match key.as_str() {
            "senior_if_factor" => &mut config.senior_if_factor,
            "influential_if_factor" => &mut config.influential_if_factor,
            "cliff_ratio" => &mut config.cliff_ratio,
            "pair_citation_ratio" => &mut config.pair_citation_ratio,
            "pair_if_tolerance" => &mut config.pair_if_tolerance,
            _ => return Err(format!("unknown field `{key}`")),
        };
        *slot = v
            .as_f64()
            .ok_or_else(|| format!("field `{key}` must be a number, got {v}"))?;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn resolve_profile(source: &ProfileSource) -> Result<AuthorProfile, Failure> {
    if let Some(path) = &source.input.input {
        return read_profile(path);
    }
    let author = source
        .input
        .author
        .as_deref()
        .ok_or_else(|| Failure::input("one of --input or --author is required"))?;
    let cache = ProfileCache::resolve(source.catalog.cache_dir.as_deref());
    match cache.load(short_id(author)) {
        Ok(profile) => return Ok(profile),
        Err(CacheError::CacheMiss(_)) => {}
        Err(e) => warn!("{e}; fetching again"),
    }
    let (profile, _) = fetch_to_cache(author, &source.catalog, &cache)?;
    Ok(profile)
}

fn fetch_to_cache(
    author: &str,
    args: &CatalogArgs,
    cache: &ProfileCache,
) -> Result<(AuthorProfile, PathBuf), Failure> {
    let config = CatalogConfig {
        contact_email: args.mailto.clone(),
        rate_limit: args.rate_limit,
        ..CatalogConfig::new(args.catalog_url.clone())
    };
    let transport: Box<dyn Transport> = match (&args.replay_fixtures, &args.record_fixtures) {
        (Some(dir), _) => Box::new(FixtureTransport::from_dir(dir).map_err(|e| {
            Failure::input(format!("cannot read fixtures in {}: {e}", dir.display()))
        })?),
        (None, Some(dir)) => {
            let live = UreqTransport::new(config.timeout);
            Box::new(RecordingTransport::new(live, dir).map_err(|e| {
                Failure::input(format!(
                    "cannot create fixture directory {}: {e}",
                    dir.display()
                ))
            })?)
        }
        (None, None) => Box::new(UreqTransport::new(config.timeout)),
    };
    let client = CatalogClient::new(config, transport, SystemClock::default())?;
    let (outcome, path) = client.fetch_into_cache(author, cache)?;
    for s in &outcome.skipped {
        warn!("skipped work {}: {:?}", s.work_id, s.reason);
    }
    Ok((outcome.profile, path))
}
