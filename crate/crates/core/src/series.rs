//! Daily binary activity series per `(actor, source class)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{AnalysisWindow, ClassifiedEvent, SourceClass};

/// Resampling configuration. The period is always one UTC day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub window: AnalysisWindow,
}

impl SeriesConfig {
    pub fn new(window: AnalysisWindow) -> Self {
        SeriesConfig { window }
    }

    /// Series length `T`, validated to be at least 2.
    pub fn days(&self) -> Result<usize> {
        let days = self.window.days();
        if days < 2 {
            return Err(Error::EmptyWindow { days });
        }
        Ok(days as usize)
    }
}

/// Activity of one actor for one source class: `bits[t]` is set iff the
/// actor shared at least one article of that class on day `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarySeries {
    pub actor_id: String,
    pub source_class: SourceClass,
    pub bits: Vec<bool>,
}

impl BinarySeries {
    pub fn new(actor_id: impl Into<String>, source_class: SourceClass, bits: Vec<bool>) -> Self {
        BinarySeries {
            actor_id: actor_id.into(),
            source_class,
            bits,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of active days.
    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Parses a `0`/`1` string into bits.
pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

pub type SeriesKey = (String, SourceClass);

/// All materialized series, keyed and iterated in `(actor_id, class)` order.
pub type SeriesMap = BTreeMap<SeriesKey, BinarySeries>;

/// Resamples classified events into daily binary series.
///
/// Events outside the window are ignored. Keys whose series would be all zero
/// are not materialized.
pub fn binarize(events: &[ClassifiedEvent], cfg: &SeriesConfig) -> Result<SeriesMap> {
    let days = cfg.days()?;
    let mut map = SeriesMap::new();
    for ev in events {
        let Some(day) = cfg.window.day_index(&ev.timestamp) else {
            continue;
        };
        let entry = map
            .entry((ev.actor_id.clone(), ev.source_class))
            .or_insert_with(|| BinarySeries::new(ev.actor_id.clone(), ev.source_class, vec![false; days]));
        entry.bits[day] = true;
    }
    Ok(map)
}

/// Keeps only series with at least `min_active_days` active days.
pub fn activity_filter(map: SeriesMap, min_active_days: usize) -> SeriesMap {
    map.into_iter()
        .filter(|(_, s)| s.popcount() >= min_active_days)
        .collect()
}

/// Number of materialized series per class, in class order.
pub fn counts_by_class(map: &SeriesMap) -> BTreeMap<SourceClass, usize> {
    let mut counts: BTreeMap<SourceClass, usize> = SourceClass::ALL.iter().map(|&c| (c, 0)).collect();
    for (_, class) in map.keys() {
        *counts.entry(*class).or_default() += 1;
    }
    counts
}

/// Debug dump as CSV `actor_id,class,bits`.
pub fn to_csv(map: &SeriesMap) -> String {
    let mut out = String::from("actor_id,class,bits\n");
    for s in map.values() {
        let _ = writeln!(out, "{},{},{}", csv_field(&s.actor_id), s.source_class, s.to_bit_string());
    }
    out
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
