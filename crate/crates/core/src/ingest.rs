//! Share-event parsing and source classification.
//!
//! Every shared URL is reduced to a host name and looked up in two local
//! ranking tables: a trust table (`domain,score`, scores in `[0, 100]`) and a
//! popularity table (`rank,domain`, rank 1 is the most popular site). The
//! cross product of "trustworthy?" and "mainstream?" gives the four
//! [`SourceClass`] values.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime, NaiveTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Credibility × popularity class of a news source.
///
/// The derived ordering `TM < TF < UM < UF` is the canonical output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SourceClass {
    /// Trustworthy mainstream.
    TM,
    /// Trustworthy fringe.
    TF,
    /// Untrustworthy mainstream.
    UM,
    /// Untrustworthy fringe.
    UF,
}

impl SourceClass {
    pub const ALL: [SourceClass; 4] = [SourceClass::TM, SourceClass::TF, SourceClass::UM, SourceClass::UF];

    pub fn from_flags(trustworthy: bool, mainstream: bool) -> Self {
        match (trustworthy, mainstream) {
            (true, true) => SourceClass::TM,
            (true, false) => SourceClass::TF,
            (false, true) => SourceClass::UM,
            (false, false) => SourceClass::UF,
        }
    }

    pub fn is_trustworthy(self) -> bool {
        matches!(self, SourceClass::TM | SourceClass::TF)
    }

    pub fn is_mainstream(self) -> bool {
        matches!(self, SourceClass::TM | SourceClass::UM)
    }

    /// Position in [`SourceClass::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SourceClass::TM => "TM",
            SourceClass::TF => "TF",
            SourceClass::UM => "UM",
            SourceClass::UF => "UF",
        }
    }
}

impl fmt::Display for SourceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TM" => Ok(SourceClass::TM),
            "TF" => Ok(SourceClass::TF),
            "UM" => Ok(SourceClass::UM),
            "UF" => Ok(SourceClass::UF),
            other => Err(Error::Config(format!("unknown source class {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Scores at or above this value are trustworthy.
    pub trust_threshold: f64,
    /// Ranks at or below this value are mainstream.
    pub mainstream_rank_cutoff: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            trust_threshold: 60.0,
            mainstream_rank_cutoff: 100_000,
        }
    }
}

/// Domain → credibility score in `[0, 100]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrustTable(BTreeMap<String, f64>);

/// Domain → popularity rank (1 = most popular).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PopularityTable(BTreeMap<String, u64>);

impl TrustTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a score, normalizing the domain. The first score for a domain wins.
    pub fn insert(&mut self, domain: &str, score: f64) -> Result<()> {
        if !(0.0..=100.0).contains(&score) {
            return Err(Error::Config(format!("trust score {score} for {domain:?} is outside [0, 100]")));
        }
        let domain = normalize_table_domain(domain).ok_or_else(|| Error::MalformedUrl(domain.to_string()))?;
        self.0.entry(domain).or_insert(score);
        Ok(())
    }

    pub fn get(&self, domain: &str) -> Option<f64> {
        self.0.get(domain).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reads a `domain,score` CSV. A leading header row is detected and skipped.
    pub fn load(path: &Path) -> Result<Self> {
        let mut table = TrustTable::new();
        for (line, record) in read_table_rows(path)? {
            if record.len() < 2 {
                return Err(Error::parse(path, line, "expected `domain,score`"));
            }
            let score = match record[1].parse::<f64>() {
                Ok(s) => s,
                Err(_) if line == 1 => continue,
                Err(_) => return Err(Error::parse(path, line, format!("invalid score {:?}", record[1]))),
            };
            table
                .insert(&record[0], score)
                .map_err(|e| Error::parse(path, line, e.to_string()))?;
        }
        Ok(table)
    }
}

impl PopularityTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a rank, normalizing the domain. The first (best) rank for a domain wins.
    pub fn insert(&mut self, domain: &str, rank: u64) -> Result<()> {
        if rank < 1 {
            return Err(Error::Config(format!("popularity rank for {domain:?} must be >= 1")));
        }
        let domain = normalize_table_domain(domain).ok_or_else(|| Error::MalformedUrl(domain.to_string()))?;
        self.0.entry(domain).or_insert(rank);
        Ok(())
    }

    pub fn get(&self, domain: &str) -> Option<u64> {
        self.0.get(domain).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reads a `rank,domain` CSV. A header row is optional; when present and it
    /// names a `domain` column (as the Majestic Million export does), that
    /// column and `globalrank`/`rank` are used instead of the first two.
    pub fn load(path: &Path) -> Result<Self> {
        let mut table = PopularityTable::new();
        let mut rank_col = 0;
        let mut domain_col = 1;
        for (line, record) in read_table_rows(path)? {
            if line == 1 && record.first().is_some_and(|f| f.parse::<u64>().is_err()) {
                let lower: Vec<String> = record.iter().map(|h| h.to_ascii_lowercase()).collect();
                if let Some(i) = lower.iter().position(|h| h == "domain") {
                    domain_col = i;
                }
                if let Some(i) = lower.iter().position(|h| h == "globalrank" || h == "rank") {
                    rank_col = i;
                }
                continue;
            }
            let (Some(rank), Some(domain)) = (record.get(rank_col), record.get(domain_col)) else {
                return Err(Error::parse(path, line, "expected `rank,domain`"));
            };
            let rank = rank
                .parse::<u64>()
                .map_err(|_| Error::parse(path, line, format!("invalid rank {rank:?}")))?;
            table
                .insert(domain, rank)
                .map_err(|e| Error::parse(path, line, e.to_string()))?;
        }
        Ok(table)
    }
}

fn read_table_rows(path: &Path) -> Result<Vec<(u64, Vec<String>)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    Ok(rows)
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        kind => Error::parse(path, line, format!("{kind:?}")),
    }
}

fn normalize_table_domain(raw: &str) -> Option<String> {
    let lower = raw.trim().to_ascii_lowercase();
    let host = lower.strip_prefix("www.").unwrap_or(&lower);
    let valid = !host.is_empty() && !host.contains(|c: char| matches!(c, '/' | ':' | '?' | '#' | '@') || c.is_whitespace());
    valid.then(|| host.to_string())
}

/// Reduces a URL to its lowercase host with a single leading `www.` removed.
///
/// URLs without a scheme are read as `http://` URLs so bare host names work.
pub fn extract_domain(url: &str) -> Result<String> {
    let trimmed = url.trim();
    if trimmed.is_empty() {
        return Err(Error::MalformedUrl(url.to_string()));
    }
    let parsed = if trimmed.contains("://") {
        url::Url::parse(trimmed)
    } else {
        url::Url::parse(&format!("http://{trimmed}"))
    }
    .map_err(|_| Error::MalformedUrl(url.to_string()))?;

    let host = match parsed.host() {
        Some(url::Host::Domain(d)) => d.to_ascii_lowercase(),
        Some(url::Host::Ipv4(ip)) => ip.to_string(),
        Some(url::Host::Ipv6(ip)) => ip.to_string(),
        None => return Err(Error::MalformedUrl(url.to_string())),
    };
    let host = host.strip_prefix("www.").map(str::to_string).unwrap_or(host);
    if host.is_empty() {
        return Err(Error::MalformedUrl(url.to_string()));
    }
    Ok(host)
}

/// Maps a normalized domain to its source class.
pub fn classify_domain(
    domain: &str,
    trust: &TrustTable,
    popularity: &PopularityTable,
    cfg: &ClassifyConfig,
) -> Result<SourceClass> {
    let (Some(score), Some(rank)) = (trust.get(domain), popularity.get(domain)) else {
        return Err(Error::UnknownDomain(domain.to_string()));
    };
    Ok(SourceClass::from_flags(
        score >= cfg.trust_threshold,
        rank <= cfg.mainstream_rank_cutoff,
    ))
}

/// Half-open day range `[start, end)` in UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl AnalysisWindow {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Self {
        AnalysisWindow { start, end }
    }

    /// Number of days `T`; zero or negative for an inverted window.
    pub fn days(&self) -> i64 {
        (self.end - self.start).num_days()
    }

    pub fn start_instant(&self) -> DateTime<Utc> {
        Utc.from_utc_datetime(&self.start.and_time(NaiveTime::MIN))
    }

    pub fn end_instant(&self) -> DateTime<Utc> {
        Utc.from_utc_datetime(&self.end.and_time(NaiveTime::MIN))
    }

    pub fn contains(&self, ts: &DateTime<Utc>) -> bool {
        *ts >= self.start_instant() && *ts < self.end_instant()
    }

    /// Day offset of `ts` from the window start, if it falls inside the window.
    pub fn day_index(&self, ts: &DateTime<Utc>) -> Option<usize> {
        self.contains(ts)
            .then(|| (ts.date_naive() - self.start).num_days() as usize)
    }
}

/// One raw share event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub actor_id: String,
    pub timestamp: DateTime<Utc>,
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedEvent {
    pub actor_id: String,
    pub timestamp: DateTime<Utc>,
    pub domain: String,
    pub source_class: SourceClass,
}

/// Rows that did not become classified events, by reason.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropStats {
    pub outside_window: u64,
    pub malformed_url: u64,
    pub unknown_domain: u64,
}

impl DropStats {
    pub fn total(&self) -> u64 {
        self.outside_window + self.malformed_url + self.unknown_domain
    }
}

impl fmt::Display for DropStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "outside_window={} malformed_url={} unknown_domain={}",
            self.outside_window, self.malformed_url, self.unknown_domain
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadedEvents {
    pub events: Vec<ClassifiedEvent>,
    pub drops: DropStats,
    pub input_rows: u64,
}

#[derive(Deserialize)]
struct RawEvent {
    actor_id: String,
    timestamp: String,
    url: String,
}

/// Parses an RFC 3339 instant, or an ISO-8601 date-time without offset read as UTC.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(ts) = DateTime::parse_from_rfc3339(s) {
        return Some(ts.with_timezone(&Utc));
    }
    ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"]
        .iter()
        .find_map(|fmt| NaiveDateTime::parse_from_str(s, fmt).ok())
        .map(|naive| Utc.from_utc_datetime(&naive))
}

fn to_record(path: &Path, line: u64, raw: RawEvent) -> Result<EventRecord> {
    if raw.actor_id.trim().is_empty() {
        return Err(Error::parse(path, line, "empty actor_id"));
    }
    let timestamp = parse_timestamp(&raw.timestamp)
        .ok_or_else(|| Error::parse(path, line, format!("invalid timestamp {:?}", raw.timestamp)))?;
    Ok(EventRecord {
        actor_id: raw.actor_id.trim().to_string(),
        timestamp,
        url: raw.url,
    })
}

/// Reads raw event records from a `.jsonl` or headered `.csv` file.
pub fn read_events(path: &Path) -> Result<Vec<EventRecord>> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("jsonl") => read_jsonl(path),
        Some("csv") => read_csv(path),
        _ => Err(Error::Config(format!(
            "events file {} must have a .jsonl or .csv extension",
            path.display()
        ))),
    }
}

fn read_jsonl(path: &Path) -> Result<Vec<EventRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawEvent =
            serde_json::from_str(&line).map_err(|e| Error::parse(path, line_no, e.to_string()))?;
        out.push(to_record(path, line_no, raw)?);
    }
    Ok(out)
}

fn read_csv(path: &Path) -> Result<Vec<EventRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::Headers)
        .from_reader(BufReader::new(file));
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let raw: RawEvent = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::parse(path, line, e.to_string()))?;
        out.push(to_record(path, line, raw)?);
    }
    Ok(out)
}

/// Filters raw records to the window and classifies their sources.
///
/// Output is sorted by `(actor_id, timestamp, domain)`. Every input record is
/// either returned or counted in exactly one [`DropStats`] bucket.
pub fn classify_events(
    records: Vec<EventRecord>,
    window: &AnalysisWindow,
    trust: &TrustTable,
    popularity: &PopularityTable,
    cfg: &ClassifyConfig,
) -> LoadedEvents {
    let mut loaded = LoadedEvents {
        input_rows: records.len() as u64,
        ..LoadedEvents::default()
    };
    for rec in records {
        if !window.contains(&rec.timestamp) {
            loaded.drops.outside_window += 1;
            continue;
        }
        let domain = match extract_domain(&rec.url) {
            Ok(d) => d,
            Err(_) => {
                loaded.drops.malformed_url += 1;
                continue;
            }
        };
        match classify_domain(&domain, trust, popularity, cfg) {
            Ok(source_class) => loaded.events.push(ClassifiedEvent {
                actor_id: rec.actor_id,
                timestamp: rec.timestamp,
                domain,
                source_class,
            }),
            Err(_) => loaded.drops.unknown_domain += 1,
        }
    }
    loaded.events.sort_by(|a, b| {
        (&a.actor_id, a.timestamp, &a.domain).cmp(&(&b.actor_id, b.timestamp, &b.domain))
    });
    loaded
}

/// Reads, filters and classifies an events file.
pub fn load_events(
    path: &Path,
    window: &AnalysisWindow,
    trust: &TrustTable,
    popularity: &PopularityTable,
    cfg: &ClassifyConfig,
) -> Result<LoadedEvents> {
    let records = read_events(path)?;
    Ok(classify_events(records, window, trust, popularity, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn tables() -> (TrustTable, PopularityTable) {
        let mut trust = TrustTable::new();
        let mut pop = PopularityTable::new();
        for (d, s, r) in [
            ("nytimes.com", 75.0, 900),
            ("fringe.example", 20.0, 5_000_000),
            ("edge.example", 60.0, 1),
            ("small.example", 95.0, 100_001),
        ] {
            trust.insert(d, s).unwrap();
            pop.insert(d, r).unwrap();
        }
        (trust, pop)
    }

    #[test]
    fn extract_domain_examples() {
        assert_eq!(extract_domain("https://www.nytimes.com/2022/02/24/world").unwrap(), "nytimes.com");
        assert_eq!(extract_domain("http://News.Example.org:8080/a?b=c").unwrap(), "news.example.org");
        assert!(matches!(extract_domain("not a url"), Err(Error::MalformedUrl(_))));
        assert!(matches!(extract_domain(""), Err(Error::MalformedUrl(_))));
    }

    #[test]
    fn extract_domain_strips_only_one_www() {
        assert_eq!(extract_domain("https://www.www.example.com/").unwrap(), "www.example.com");
        assert_eq!(extract_domain("https://m.example.com/x#frag").unwrap(), "m.example.com");
        assert_eq!(extract_domain("example.com/path").unwrap(), "example.com");
    }

    #[test]
    fn classify_examples() {
        let (trust, pop) = tables();
        let cfg = ClassifyConfig::default();
        assert_eq!(classify_domain("nytimes.com", &trust, &pop, &cfg).unwrap(), SourceClass::TM);
        assert_eq!(classify_domain("fringe.example", &trust, &pop, &cfg).unwrap(), SourceClass::UF);
        assert_eq!(classify_domain("edge.example", &trust, &pop, &cfg).unwrap(), SourceClass::TM);
        assert_eq!(classify_domain("small.example", &trust, &pop, &cfg).unwrap(), SourceClass::TF);
        assert!(matches!(
            classify_domain("absent.example", &trust, &pop, &cfg),
            Err(Error::UnknownDomain(_))
        ));
    }

    #[test]
    fn classify_respects_config() {
        let (trust, pop) = tables();
        let cfg = ClassifyConfig {
            trust_threshold: 80.0,
            mainstream_rank_cutoff: 500,
        };
        assert_eq!(classify_domain("nytimes.com", &trust, &pop, &cfg).unwrap(), SourceClass::UF);
    }

    #[test]
    fn source_class_order_and_flags() {
        let mut v = vec![SourceClass::UF, SourceClass::TM, SourceClass::UM, SourceClass::TF];
        v.sort();
        assert_eq!(v, SourceClass::ALL);
        for c in SourceClass::ALL {
            assert_eq!(SourceClass::from_flags(c.is_trustworthy(), c.is_mainstream()), c);
            assert_eq!(c.as_str().parse::<SourceClass>().unwrap(), c);
        }
    }

    #[test]
    fn table_rejects_out_of_range() {
        let mut trust = TrustTable::new();
        assert!(trust.insert("a.com", 100.5).is_err());
        assert!(trust.insert("https://a.com/x", 50.0).is_err());
        let mut pop = PopularityTable::new();
        assert!(pop.insert("a.com", 0).is_err());
        pop.insert("WWW.A.com", 3).unwrap();
        assert_eq!(pop.get("a.com"), Some(3));
    }

    #[test]
    fn load_tables_with_headers() {
        let dir = tempfile::tempdir().unwrap();
        let t = dir.path().join("trust.csv");
        std::fs::write(&t, "domain,score\nnytimes.com,75\nWWW.Fringe.example, 20\n").unwrap();
        let trust = TrustTable::load(&t).unwrap();
        assert_eq!(trust.get("fringe.example"), Some(20.0));

        let p = dir.path().join("pop.csv");
        std::fs::write(
            &p,
            "GlobalRank,TldRank,Domain,TLD\n1,1,google.com,com\n2,2,nytimes.com,com\n",
        )
        .unwrap();
        let pop = PopularityTable::load(&p).unwrap();
        assert_eq!(pop.get("nytimes.com"), Some(2));

        let p2 = dir.path().join("pop2.csv");
        std::fs::write(&p2, "1,google.com\n7,nytimes.com\n").unwrap();
        assert_eq!(PopularityTable::load(&p2).unwrap().get("nytimes.com"), Some(7));

        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "a.com,10\nb.com,abc\n").unwrap();
        assert!(matches!(TrustTable::load(&bad), Err(Error::Parse { line: 2, .. })));
    }

    fn window() -> AnalysisWindow {
        AnalysisWindow::new(
            NaiveDate::from_ymd_opt(2022, 2, 1).unwrap(),
            NaiveDate::from_ymd_opt(2022, 3, 1).unwrap(),
        )
    }

    #[test]
    fn load_events_counts_unknown_domain() {
        let (trust, pop) = tables();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("events.jsonl");
        let mut f = File::create(&path).unwrap();
        writeln!(f, r#"{{"actor_id":"b","timestamp":"2022-02-03T10:00:00Z","url":"https://nytimes.com/x"}}"#).unwrap();
        writeln!(f, r#"{{"actor_id":"a","timestamp":"2022-02-04T10:00:00Z","url":"https://fringe.example/y"}}"#).unwrap();
        writeln!(f, r#"{{"actor_id":"a","timestamp":"2022-02-05T10:00:00Z","url":"https://nowhere.example/"}}"#).unwrap();
        drop(f);
        let loaded = load_events(&path, &window(), &trust, &pop, &ClassifyConfig::default()).unwrap();
        assert_eq!(loaded.events.len(), 2);
        assert_eq!(loaded.drops.unknown_domain, 1);
        assert_eq!(loaded.events[0].actor_id, "a");
        assert_eq!(loaded.events.len() as u64 + loaded.drops.total(), loaded.input_rows);
    }

    #[test]
    fn load_events_empty_file() {
        let (trust, pop) = tables();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("events.jsonl");
        std::fs::write(&path, "").unwrap();
        let loaded = load_events(&path, &window(), &trust, &pop, &ClassifyConfig::default()).unwrap();
        assert!(loaded.events.is_empty());
        assert_eq!(loaded.drops, DropStats::default());
        assert_eq!(loaded.input_rows, 0);
    }

    #[test]
    fn load_events_csv_window_and_malformed() {
        let (trust, pop) = tables();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("events.csv");
        std::fs::write(
            &path,
            "actor_id,timestamp,url\n\
             a,2022-01-31T23:59:59Z,https://nytimes.com/\n\
             a,2022-02-01T00:00:00Z,https://nytimes.com/\n\
             b,2022-02-10 08:00:00,not a url\n\
             c,2022-03-01T00:00:00+00:00,https://nytimes.com/\n",
        )
        .unwrap();
        let loaded = load_events(&path, &window(), &trust, &pop, &ClassifyConfig::default()).unwrap();
        assert_eq!(loaded.events.len(), 1);
        assert_eq!(loaded.drops.outside_window, 2);
        assert_eq!(loaded.drops.malformed_url, 1);
        assert_eq!(loaded.input_rows, 4);
    }

    #[test]
    fn load_events_reports_parse_line() {
        let (trust, pop) = tables();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("events.csv");
        std::fs::write(
            &path,
            "actor_id,timestamp,url\na,2022-02-02T00:00:00Z,https://nytimes.com/\na,yesterday,https://nytimes.com/\n",
        )
        .unwrap();
        let err = load_events(&path, &window(), &trust, &pop, &ClassifyConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let jl = dir.path().join("events.jsonl");
        std::fs::write(&jl, "{\"actor_id\":\"\",\"timestamp\":\"2022-02-02T00:00:00Z\",\"url\":\"x.com\"}\n").unwrap();
        let err = load_events(&jl, &window(), &trust, &pop, &ClassifyConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn window_day_index() {
        let w = window();
        assert_eq!(w.days(), 28);
        let ts = parse_timestamp("2022-02-03T23:59:59Z").unwrap();
        assert_eq!(w.day_index(&ts), Some(2));
        let ts = parse_timestamp("2022-02-03T23:30:00-05:00").unwrap();
        assert_eq!(w.day_index(&ts), Some(3));
    }
}
