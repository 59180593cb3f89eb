//! Run configuration, pipeline orchestration and output files.
//!
//! A run writes the following tree under the output directory:
//!
//! ```text
//! layers/layer_<SRC>_<TGT>.csv        16 edge lists
//! measures/measures_<C>.csv           per-multiplex node measures
//! cooccurrence.csv                    configured mode and scope
//! figures/influence_distribution_<C>.csv
//! figures/participation_<C>.csv
//! figures/participation_reference.csv
//! figures/participation_axes.csv
//! figures/*.svg                       when emit_charts = true
//! series.csv                          when dump_series = true
//! run_summary.json
//! ```
//!
//! Files are staged in a hidden directory and only moved into place once
//! every stage has succeeded.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use chrono::NaiveDate;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{self, AnalysisWindow, ClassifyConfig, DropStats, PopularityTable, SourceClass, TrustTable};
use crate::multiplex::{self, CooccurrenceMatrix, CooccurrenceMode, CooccurrenceScope, Multiplex};
use crate::numfmt::format_sig;
use crate::series::{self, csv_field, SeriesConfig};
use crate::te::{LayerBuilder, LayerId, LayerOptions, LayerSet, LogBase};

/// Name of the environment variable that overrides the worker count.
pub const WORKERS_ENV: &str = "TEPLEX_WORKERS";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub events: Option<PathBuf>,
    pub trust_table: Option<PathBuf>,
    pub popularity_table: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub window_start: Option<NaiveDate>,
    pub window_end: Option<NaiveDate>,
    pub trust_threshold: f64,
    pub mainstream_rank_cutoff: u64,
    pub te_min: f64,
    pub min_active_days: usize,
    pub log_base: LogBase,
    pub cooccurrence_mode: CooccurrenceMode,
    pub cooccurrence_scope: CooccurrenceScope,
    pub emit_charts: bool,
    pub dump_series: bool,
    /// Source-shuffle surrogates per candidate edge; 0 disables the test.
    pub permutations: usize,
    pub seed: u64,
    /// Worker threads for the pairwise kernel; 0 lets the runtime decide.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let classify = ClassifyConfig::default();
        let layer = LayerOptions::default();
        RunConfig {
            events: None,
            trust_table: None,
            popularity_table: None,
            output_dir: None,
            window_start: None,
            window_end: None,
            trust_threshold: classify.trust_threshold,
            mainstream_rank_cutoff: classify.mainstream_rank_cutoff,
            te_min: layer.te_min,
            min_active_days: 3,
            log_base: LogBase::Bits,
            cooccurrence_mode: CooccurrenceMode::default(),
            cooccurrence_scope: CooccurrenceScope::default(),
            emit_charts: false,
            dump_series: false,
            permutations: 0,
            seed: 0,
            workers: 0,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean {value:?} for {key}"))),
    }
}

fn parse_log_base(value: &str) -> Result<LogBase> {
    match value.to_ascii_lowercase().as_str() {
        "2" | "bits" => Ok(LogBase::Bits),
        "e" | "nats" => Ok(LogBase::Nats),
        _ => Err(Error::Config(format!("invalid log_base {value:?}; use 2 or e"))),
    }
}

impl RunConfig {
    pub const KEYS: [&'static str; 18] = [
        "events",
        "trust_table",
        "popularity_table",
        "output_dir",
        "window_start",
        "window_end",
        "trust_threshold",
        "mainstream_rank_cutoff",
        "te_min",
        "min_active_days",
        "log_base",
        "cooccurrence_mode",
        "cooccurrence_scope",
        "emit_charts",
        "dump_series",
        "permutations",
        "seed",
        "workers",
    ];

    /// Sets one key. Relative paths are resolved against `base_dir`.
    pub fn set(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        let value = value.trim();
        // An empty value clears an optional key.
        let path = || {
            let p = PathBuf::from(value);
            if value.is_empty() {
                None
            } else if p.is_relative() {
                Some(base_dir.join(p))
            } else {
                Some(p)
            }
        };
        let date = || -> Result<Option<NaiveDate>> {
            if value.is_empty() {
                Ok(None)
            } else {
                parse_value(key, value).map(Some)
            }
        };
        match key {
            "events" => self.events = path(),
            "trust_table" => self.trust_table = path(),
            "popularity_table" => self.popularity_table = path(),
            "output_dir" => self.output_dir = path(),
            "window_start" => self.window_start = date()?,
            "window_end" => self.window_end = date()?,
            "trust_threshold" => self.trust_threshold = parse_value(key, value)?,
            "mainstream_rank_cutoff" => self.mainstream_rank_cutoff = parse_value(key, value)?,
            "te_min" => self.te_min = parse_value(key, value)?,
            "min_active_days" => self.min_active_days = parse_value(key, value)?,
            "log_base" => self.log_base = parse_log_base(value)?,
            "cooccurrence_mode" => self.cooccurrence_mode = value.parse()?,
            "cooccurrence_scope" => self.cooccurrence_scope = value.parse()?,
            "emit_charts" => self.emit_charts = parse_bool(key, value)?,
            "dump_series" => self.dump_series = parse_bool(key, value)?,
            "permutations" => self.permutations = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "workers" => self.workers = parse_value(key, value)?,
            _ => return Err(Error::Config(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str, base_dir: &Path) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(key.trim(), value, base_dir)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        // Anchor relative paths absolutely so the printed config works from anywhere.
        let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let base = fs::canonicalize(parent).unwrap_or_else(|_| parent.to_path_buf());
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text, &base)?;
        Ok(cfg)
    }

    /// Effective configuration in the same `key = value` format.
    pub fn to_text(&self) -> String {
        let p = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let d = |d: &Option<NaiveDate>| d.map(|d| d.to_string()).unwrap_or_default();
        let values = [
            p(&self.events),
            p(&self.trust_table),
            p(&self.popularity_table),
            p(&self.output_dir),
            d(&self.window_start),
            d(&self.window_end),
            self.trust_threshold.to_string(),
            self.mainstream_rank_cutoff.to_string(),
            self.te_min.to_string(),
            self.min_active_days.to_string(),
            match self.log_base {
                LogBase::Bits => "2".to_string(),
                LogBase::Nats => "e".to_string(),
            },
            self.cooccurrence_mode.to_string(),
            self.cooccurrence_scope.to_string(),
            self.emit_charts.to_string(),
            self.dump_series.to_string(),
            self.permutations.to_string(),
            self.seed.to_string(),
            self.workers.to_string(),
        ];
        let mut out = String::new();
        for (k, v) in Self::KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn window(&self) -> Result<AnalysisWindow> {
        let (Some(start), Some(end)) = (self.window_start, self.window_end) else {
            return Err(Error::Config("window_start and window_end are required".into()));
        };
        let window = AnalysisWindow::new(start, end);
        if window.days() < 2 {
            return Err(Error::Config(format!(
                "window {start}..{end} spans {} day(s); at least 2 are required",
                window.days()
            )));
        }
        Ok(window)
    }

    pub fn classify_config(&self) -> ClassifyConfig {
        ClassifyConfig {
            trust_threshold: self.trust_threshold,
            mainstream_rank_cutoff: self.mainstream_rank_cutoff,
        }
    }

    pub fn layer_options(&self) -> LayerOptions {
        LayerOptions {
            te_min: self.te_min,
            log_base: self.log_base,
            permutations: self.permutations,
            seed: self.seed,
        }
    }

    fn require_file(name: &str, p: &Option<PathBuf>) -> Result<PathBuf> {
        let p = p.as_ref().ok_or_else(|| Error::Config(format!("{name} is required")))?;
        if !p.is_file() {
            return Err(Error::Config(format!("{name} {} does not exist", p.display())));
        }
        Ok(p.clone())
    }

    pub fn output_dir(&self) -> Result<PathBuf> {
        self.output_dir
            .clone()
            .ok_or_else(|| Error::Config("output_dir is required".into()))
    }

    /// Checks thresholds and that every input path resolves.
    pub fn validate(&self) -> Result<()> {
        self.validate_parameters()?;
        Self::require_file("events", &self.events)?;
        Self::require_file("trust_table", &self.trust_table)?;
        Self::require_file("popularity_table", &self.popularity_table)?;
        self.window()?;
        self.output_dir()?;
        Ok(())
    }

    /// Range checks that do not touch the filesystem.
    pub fn validate_parameters(&self) -> Result<()> {
        if !(0.0..=100.0).contains(&self.trust_threshold) {
            return Err(Error::Config("trust_threshold must be within [0, 100]".into()));
        }
        if self.mainstream_rank_cutoff < 1 {
            return Err(Error::Config("mainstream_rank_cutoff must be >= 1".into()));
        }
        if !(self.te_min.is_finite() && self.te_min >= 0.0) {
            return Err(Error::Config("te_min must be a finite value >= 0".into()));
        }
        if self.min_active_days < 1 {
            return Err(Error::Config("min_active_days must be >= 1".into()));
        }
        Ok(())
    }

    /// Applies the worker-count environment override, if set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(WORKERS_ENV) {
            self.workers = parse_value(WORKERS_ENV, &v)?;
        }
        Ok(())
    }
}

/// Pipeline stage, used to tag errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Config,
    Ingest,
    Series,
    Te,
    Multiplex,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Series => "series",
            Stage::Te => "te",
            Stage::Multiplex => "multiplex",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("[{stage}] {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

impl PipelineError {
    pub fn new(stage: Stage, source: Error) -> Self {
        PipelineError { stage, source }
    }

    /// Process exit status: 1 configuration, 2 data, 3 internal.
    pub fn exit_code(&self) -> u8 {
        match (&self.source, self.stage) {
            (Error::Config(_), _) | (_, Stage::Config) => 1,
            (
                Error::Io { .. }
                | Error::Parse { .. }
                | Error::MalformedUrl(_)
                | Error::UnknownDomain(_)
                | Error::EmptyWindow { .. }
                | Error::LengthMismatch { .. }
                | Error::SeriesTooShort(_)
                | Error::InvalidSpec(_)
                | Error::CouplingDomain(_)
                | Error::MultiDriverUnsupported(_),
                _,
            ) => 2,
            _ => 3,
        }
    }
}

trait StageExt<T> {
    fn stage(self, stage: Stage) -> std::result::Result<T, PipelineError>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: Stage) -> std::result::Result<T, PipelineError> {
        self.map_err(|e| PipelineError::new(stage, e))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LayerSummary {
    /// Ordered series pairs for which TE was estimated.
    pub evaluated_pairs: u64,
    pub edges: u64,
}

/// Counts and timings from one run. Timings are reported on stderr only so
/// that the written summary is reproducible.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub input_rows: u64,
    pub drops: DropStats,
    pub classified_events: u64,
    pub series_per_class: BTreeMap<SourceClass, usize>,
    pub series_after_filter: BTreeMap<SourceClass, usize>,
    pub layers: BTreeMap<String, LayerSummary>,
    pub total_edges: u64,
    pub ranked_actors: BTreeMap<SourceClass, usize>,
    #[serde(skip)]
    pub timings: Vec<(Stage, f64)>,
}

impl RunSummary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }

    pub fn timing_report(&self) -> String {
        self.timings
            .iter()
            .map(|(s, secs)| format!("{s}={secs:.3}s"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A set of output files committed to a directory only on success.
#[derive(Debug, Default)]
pub struct OutputTree {
    files: BTreeMap<PathBuf, Vec<u8>>,
}

impl OutputTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, relative: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.insert(relative.into(), contents.into());
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.keys().map(PathBuf::as_path)
    }

    pub fn get(&self, relative: &str) -> Option<&[u8]> {
        self.files.get(Path::new(relative)).map(Vec::as_slice)
    }

    /// Writes every file into a staging directory under `dir`, then moves
    /// them into place. On failure the staging directory is removed.
    pub fn commit(&self, dir: &Path) -> Result<()> {
        let created = !dir.exists();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let staging = dir.join(format!(".teplex-staging-{}", std::process::id()));
        let result = self.stage_into(&staging).and_then(|()| self.move_into(&staging, dir));
        let _ = fs::remove_dir_all(&staging);
        if result.is_err() && created {
            let _ = fs::remove_dir(dir);
        }
        result
    }

    fn stage_into(&self, staging: &Path) -> Result<()> {
        for (rel, bytes) in &self.files {
            let path = staging.join(rel);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    fn move_into(&self, staging: &Path, dir: &Path) -> Result<()> {
        for rel in self.files.keys() {
            let dest = dir.join(rel);
            if let Some(parent) = dest.parent() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::rename(staging.join(rel), &dest).map_err(|e| Error::io(&dest, e))?;
        }
        Ok(())
    }
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

struct Timer {
    start: Instant,
}

impl Timer {
    fn start() -> Self {
        Timer { start: Instant::now() }
    }

    fn lap(&mut self, summary: &mut RunSummary, stage: Stage) {
        summary.timings.push((stage, self.start.elapsed().as_secs_f64()));
        self.start = Instant::now();
    }
}

fn build_layers(
    cfg: &RunConfig,
    summary: &mut RunSummary,
    out: &mut OutputTree,
) -> std::result::Result<LayerSet, PipelineError> {
    cfg.validate().stage(Stage::Config)?;
    let window = cfg.window().stage(Stage::Config)?;
    let mut timer = Timer::start();

    let trust = TrustTable::load(cfg.trust_table.as_ref().expect("validated")).stage(Stage::Ingest)?;
    let popularity =
        PopularityTable::load(cfg.popularity_table.as_ref().expect("validated")).stage(Stage::Ingest)?;
    let loaded = ingest::load_events(
        cfg.events.as_ref().expect("validated"),
        &window,
        &trust,
        &popularity,
        &cfg.classify_config(),
    )
    .stage(Stage::Ingest)?;
    summary.input_rows = loaded.input_rows;
    summary.drops = loaded.drops;
    summary.classified_events = loaded.events.len() as u64;
    timer.lap(summary, Stage::Ingest);

    let all_series = series::binarize(&loaded.events, &SeriesConfig::new(window)).stage(Stage::Series)?;
    summary.series_per_class = series::counts_by_class(&all_series);
    let kept = series::activity_filter(all_series, cfg.min_active_days);
    summary.series_after_filter = series::counts_by_class(&kept);
    if cfg.dump_series {
        out.add("series.csv", series::to_csv(&kept));
    }
    timer.lap(summary, Stage::Series);

    let opts = cfg.layer_options();
    let mut layers = with_workers(cfg.workers, || {
        LayerBuilder::new(&kept).map(|builder| builder.build_all(&opts))
    })
    .and_then(|r| r)
    .stage(Stage::Te)?;
    layers.round_to_export_precision();
    for id in LayerId::all() {
        let evaluated = evaluated_pairs(&kept, id);
        summary.layers.insert(
            id.to_string(),
            LayerSummary {
                evaluated_pairs: evaluated,
                edges: layers.layer(id).len() as u64,
            },
        );
    }
    summary.total_edges = layers.total_edges() as u64;
    for layer in &layers.layers {
        let mut bytes = Vec::new();
        layers
            .write_layer_csv(layer, &mut bytes)
            .expect("writing to memory cannot fail");
        out.add(Path::new("layers").join(layer.id.file_name()), bytes);
    }
    timer.lap(summary, Stage::Te);
    Ok(layers)
}

fn evaluated_pairs(series: &series::SeriesMap, id: LayerId) -> u64 {
    let sources: Vec<&str> = series
        .keys()
        .filter(|(_, c)| *c == id.source)
        .map(|(a, _)| a.as_str())
        .collect();
    let targets: Vec<&str> = series
        .keys()
        .filter(|(_, c)| *c == id.target)
        .map(|(a, _)| a.as_str())
        .collect();
    let shared = sources.iter().filter(|a| targets.binary_search(a).is_ok()).count();
    (sources.len() * targets.len() - shared) as u64
}

fn report_summary(summary: &RunSummary) {
    eprintln!(
        "teplex: {} input rows, {} classified, dropped {}",
        summary.input_rows, summary.classified_events, summary.drops
    );
    eprintln!("teplex: {} edges across 16 layers", summary.total_edges);
    if !summary.timings.is_empty() {
        eprintln!("teplex: timings {}", summary.timing_report());
    }
}

/// Full pipeline: ingest, series, layers, multiplex measures and all figure data.
pub fn run_pipeline(cfg: &RunConfig) -> std::result::Result<RunSummary, PipelineError> {
    let mut summary = RunSummary::default();
    let mut out = OutputTree::new();
    let layers = build_layers(cfg, &mut summary, &mut out)?;
    let mut timer = Timer::start();

    let muxes = multiplex::build_multiplexes(&layers);
    add_measure_outputs(&muxes, cfg.emit_charts, &mut out);
    for m in &muxes {
        summary.ranked_actors.insert(m.source_class(), m.measures.len());
    }
    let matrix = multiplex::cooccurrence(&layers, cfg.cooccurrence_mode, cfg.cooccurrence_scope);
    add_cooccurrence_outputs(&matrix, cfg.emit_charts, &mut out);
    timer.lap(&mut summary, Stage::Multiplex);

    out.add("run_summary.json", summary.to_json());
    out.commit(&cfg.output_dir().stage(Stage::Config)?)
        .stage(Stage::Output)?;
    timer.lap(&mut summary, Stage::Output);
    report_summary(&summary);
    Ok(summary)
}

/// Builds and writes only the sixteen layer files (plus summary).
pub fn run_layers(cfg: &RunConfig) -> std::result::Result<RunSummary, PipelineError> {
    let mut summary = RunSummary::default();
    let mut out = OutputTree::new();
    build_layers(cfg, &mut summary, &mut out)?;
    out.add("run_summary.json", summary.to_json());
    out.commit(&cfg.output_dir().stage(Stage::Config)?)
        .stage(Stage::Output)?;
    report_summary(&summary);
    Ok(summary)
}

/// Recomputes measures and their figure data from exported layer files.
pub fn run_measures(layers_dir: &Path, output_dir: &Path, charts: bool) -> std::result::Result<(), PipelineError> {
    let layers = LayerSet::read_csv_dir(layers_dir).stage(Stage::Multiplex)?;
    let muxes = multiplex::build_multiplexes(&layers);
    let mut out = OutputTree::new();
    add_measure_outputs(&muxes, charts, &mut out);
    out.commit(output_dir).stage(Stage::Output)
}

/// Recomputes the co-occurrence matrix from exported layer files.
pub fn run_cooccurrence(
    layers_dir: &Path,
    output_dir: &Path,
    mode: CooccurrenceMode,
    scope: CooccurrenceScope,
    charts: bool,
) -> std::result::Result<CooccurrenceMatrix, PipelineError> {
    let layers = LayerSet::read_csv_dir(layers_dir).stage(Stage::Multiplex)?;
    let matrix = multiplex::cooccurrence(&layers, mode, scope);
    let mut out = OutputTree::new();
    add_cooccurrence_outputs(&matrix, charts, &mut out);
    out.commit(output_dir).stage(Stage::Output)?;
    Ok(matrix)
}

fn add_measure_outputs(muxes: &[Multiplex<'_>], charts: bool, out: &mut OutputTree) {
    let figures = Path::new("figures");
    for m in muxes {
        let c = m.source_class();
        out.add(Path::new("measures").join(format!("measures_{c}.csv")), m.measures_csv());
        out.add(
            figures.join(format!("influence_distribution_{c}.csv")),
            emit_influence_distribution(m),
        );
        out.add(figures.join(format!("participation_{c}.csv")), emit_participation_scatter(m));
        if charts {
            out.add(figures.join(format!("participation_{c}.svg")), participation_svg(m));
        }
    }
    out.add(figures.join("participation_reference.csv"), participation_reference_csv());
    out.add(figures.join("participation_axes.csv"), participation_axes_csv(muxes));
}

fn add_cooccurrence_outputs(matrix: &CooccurrenceMatrix, charts: bool, out: &mut OutputTree) {
    let (csv, svg) = emit_cooccurrence_heatmap(matrix, charts);
    out.add("cooccurrence.csv", csv);
    if let Some(svg) = svg {
        out.add(Path::new("figures").join("cooccurrence.svg"), svg);
    }
}

/// Stacked-bar data: actors ranked by multiplex strength with their four
/// layer strengths.
pub fn emit_influence_distribution(mux: &Multiplex<'_>) -> String {
    let mut out = String::from("rank,actor_id,k_TM,k_TF,k_UM,k_UF\n");
    for (i, m) in mux.measures.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            i + 1,
            csv_field(&m.actor_id),
            format_sig(m.k[0], 12),
            format_sig(m.k[1], 12),
            format_sig(m.k[2], 12),
            format_sig(m.k[3], 12)
        );
    }
    out
}

/// Scatter data: multiplex strength against participation, one row per actor.
pub fn emit_participation_scatter(mux: &Multiplex<'_>) -> String {
    let mut out = String::from("o,participation,actor_id\n");
    for m in &mux.measures {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_sig(m.o, 12),
            format_sig(m.participation, 12),
            csv_field(&m.actor_id)
        );
    }
    out
}

/// Participation of an actor whose strength is spread evenly over `m` of
/// the four layers: `(4/3)(1 - 1/m)`.
pub fn participation_reference_lines() -> [(usize, f64); 4] {
    [1, 2, 3, 4].map(|m| {
        let m_layers = multiplex::LAYERS as f64;
        (m, m_layers / (m_layers - 1.0) * (1.0 - 1.0 / m as f64))
    })
}

fn participation_reference_csv() -> String {
    let mut out = String::from("layers,participation\n");
    for (m, p) in participation_reference_lines() {
        let _ = writeln!(out, "{m},{}", format_sig(p, 12));
    }
    out
}

/// Per-class x-axis extent; each multiplex is scaled to its own strongest actor.
fn participation_axes_csv(muxes: &[Multiplex<'_>]) -> String {
    let mut out = String::from("source_class,x_max\n");
    for m in muxes {
        let max = m.measures.first().map_or(0.0, |r| r.o);
        let _ = writeln!(out, "{},{}", m.source_class(), format_sig(max, 12));
    }
    out
}

/// Matrix CSV and, when requested, an SVG heatmap annotated with integer percentages.
pub fn emit_cooccurrence_heatmap(matrix: &CooccurrenceMatrix, svg: bool) -> (String, Option<String>) {
    (matrix.to_csv(), svg.then(|| cooccurrence_svg(matrix)))
}

fn cooccurrence_svg(matrix: &CooccurrenceMatrix) -> String {
    let n = matrix.dim();
    let cell = if n > 4 { 44.0 } else { 80.0 };
    let margin = 90.0;
    let size = margin + cell * n as f64 + 20.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="4" y="14">P(column | row), {} / {}</text>"#,
        matrix.mode, matrix.scope
    );
    for (j, label) in matrix.labels.iter().enumerate() {
        let x = margin + cell * (j as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#,
            margin - 8.0
        );
    }
    for (i, label) in matrix.labels.iter().enumerate() {
        let y = margin + cell * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#,
            margin - 6.0,
            y + cell / 2.0 + 4.0
        );
        for j in 0..n {
            let x = margin + cell * j as f64;
            match matrix.get(i, j) {
                Some(v) => {
                    // White to dark blue.
                    let r = (255.0 - 222.0 * v).round() as u8;
                    let g = (255.0 - 153.0 * v).round() as u8;
                    let b = (255.0 - 83.0 * v).round() as u8;
                    let text = if v > 0.55 { "white" } else { "black" };
                    let _ = writeln!(
                        s,
                        r##"<rect x="{x:.1}" y="{y:.1}" width="{cell:.1}" height="{cell:.1}" fill="#{r:02x}{g:02x}{b:02x}" stroke="#ffffff"/><text x="{:.1}" y="{:.1}" text-anchor="middle" fill="{text}">{:.0}%</text>"##,
                        x + cell / 2.0,
                        y + cell / 2.0 + 4.0,
                        (v * 100.0).round()
                    );
                }
                None => {
                    let _ = writeln!(
                        s,
                        r##"<rect x="{x:.1}" y="{y:.1}" width="{cell:.1}" height="{cell:.1}" fill="#dddddd" stroke="#ffffff"/>"##
                    );
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn participation_svg(mux: &Multiplex<'_>) -> String {
    let (w, h, pad) = (420.0, 300.0, 40.0);
    let x_max = mux.measures.first().map_or(1.0, |m| m.o).max(f64::MIN_POSITIVE);
    let px = |o: f64| pad + (w - 2.0 * pad) * o / x_max;
    let py = |p: f64| h - pad - (h - 2.0 * pad) * p;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{pad:.0}" y="16">{} multiplex: participation vs strength</text>"#, mux.source_class());
    let _ = writeln!(
        s,
        r#"<rect x="{pad:.0}" y="{pad:.0}" width="{:.0}" height="{:.0}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    for (m, p, colour) in [(2, 2.0 / 3.0, "green"), (3, 8.0 / 9.0, "red")] {
        let y = py(p);
        let _ = writeln!(
            s,
            r#"<line x1="{pad:.0}" y1="{y:.1}" x2="{:.0}" y2="{y:.1}" stroke="{colour}" stroke-dasharray="3,3"/><text x="{:.0}" y="{:.1}" fill="{colour}">m={m}</text>"#,
            w - pad,
            w - pad + 4.0,
            y + 4.0
        );
    }
    for m in &mux.measures {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="#1f5fa8" fill-opacity="0.7"/>"##,
            px(m.o),
            py(m.participation)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.0}" y="{:.0}" text-anchor="end">o (max {})</text>"#,
        w - pad,
        h - 10.0,
        format_sig(x_max, 4)
    );
    s.push_str("</svg>\n");
    s
}
