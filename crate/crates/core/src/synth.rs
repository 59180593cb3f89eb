//! Synthetic actor populations with planted influence.
//!
//! Uncoupled series are iid fair coin flips per day. A coupled target copies
//! its driver's previous day with probability `c` and otherwise flips a fresh
//! fair coin:
//!
//! ```text
//! y[t+1] = x[t]        with probability c
//!        = fair bit    otherwise
//! ```
//!
//! For an iid fair driver this gives `TE(x → y) = 1 - H_b((1 + c) / 2)` bits,
//! which [`analytic_te`] evaluates.
//!
//! # Random stream
//!
//! Output is a pure function of the [`SynthSpec`]. The generator is `ChaCha8Rng`
//! (rand_chacha) created with `seed_from_u64(seed)`. Series are visited in
//! `(actor_id, class)` order and for each one `T` words are drawn with
//! `next_u64`; for word `w` of day `t` the base bit is `w >> 63` and the copy
//! uniform is `(w & (2^53 - 1)) / 2^53`. Day 0 is always the base bit. For
//! `t >= 1` a coupled series takes its driver's day `t - 1` bit when the copy
//! uniform is below `c`, and its own base bit otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use chrono::{Days, NaiveDate};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{AnalysisWindow, SourceClass};
use crate::numfmt::format_sig;
use crate::series::{csv_field, BinarySeries, SeriesKey, SeriesMap};

/// Binary entropy in bits; `H_b(0) = H_b(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

/// Closed-form transfer entropy of the copy process with coupling `c`, in bits.
pub fn analytic_te(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::CouplingDomain(c));
    }
    Ok((1.0 - binary_entropy((1.0 + c) / 2.0)).max(0.0))
}

/// A block of `count` actors named `<prefix>-0000`, `<prefix>-0001`, ...
/// each holding one series per listed class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorGroup {
    pub prefix: String,
    pub count: usize,
    pub classes: Vec<SourceClass>,
}

impl ActorGroup {
    pub fn new(prefix: &str, count: usize, classes: &[SourceClass]) -> Self {
        ActorGroup {
            prefix: prefix.to_string(),
            count,
            classes: classes.to_vec(),
        }
    }

    pub fn actor_id(&self, i: usize) -> String {
        actor_id(&self.prefix, i)
    }
}

pub fn actor_id(prefix: &str, i: usize) -> String {
    format!("{prefix}-{i:04}")
}

/// Planted directed coupling between two series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub source_actor: String,
    pub source_class: SourceClass,
    pub target_actor: String,
    pub target_class: SourceClass,
    pub strength: f64,
}

impl Coupling {
    pub fn new(source: (&str, SourceClass), target: (&str, SourceClass), strength: f64) -> Self {
        Coupling {
            source_actor: source.0.to_string(),
            source_class: source.1,
            target_actor: target.0.to_string(),
            target_class: target.1,
            strength,
        }
    }
}

fn default_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 1, 1).expect("valid date")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub days: usize,
    pub seed: u64,
    #[serde(default = "default_start")]
    pub start_date: NaiveDate,
    pub groups: Vec<ActorGroup>,
    #[serde(default)]
    pub couplings: Vec<Coupling>,
}

/// One planted edge with its closed-form transfer entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedEdge {
    pub coupling: Coupling,
    pub analytic_te: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthLedger {
    pub edges: Vec<PlantedEdge>,
}

impl GroundTruthLedger {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("source_actor,source_class,target_actor,target_class,strength,analytic_te_bits\n");
        for e in &self.edges {
            let c = &e.coupling;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&c.source_actor),
                c.source_class,
                csv_field(&c.target_actor),
                c.target_class,
                format_sig(c.strength, 12),
                format_sig(e.analytic_te, 12)
            );
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    /// Generated series; all-zero series are omitted.
    pub series: SeriesMap,
    pub ledger: GroundTruthLedger,
    pub window: AnalysisWindow,
}

const MANTISSA_MASK: u64 = (1 << 53) - 1;
const MANTISSA_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

impl SynthSpec {
    pub fn window(&self) -> AnalysisWindow {
        AnalysisWindow::new(self.start_date, self.start_date + Days::new(self.days as u64))
    }

    /// All series keys in generation order.
    pub fn series_keys(&self) -> Result<Vec<SeriesKey>> {
        let mut keys = BTreeSet::new();
        let mut actors = BTreeSet::new();
        for g in &self.groups {
            for i in 0..g.count {
                let id = g.actor_id(i);
                if !actors.insert(id.clone()) {
                    return Err(Error::InvalidSpec(format!("duplicate actor id {id}")));
                }
                for &c in &g.classes {
                    keys.insert((id.clone(), c));
                }
            }
        }
        Ok(keys.into_iter().collect())
    }

    fn drivers(&self, keys: &[SeriesKey]) -> Result<Vec<Option<(usize, f64)>>> {
        let index: BTreeMap<&SeriesKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let lookup = |actor: &str, class: SourceClass| {
            index
                .get(&(actor.to_string(), class))
                .copied()
                .ok_or_else(|| Error::InvalidSpec(format!("coupling references missing series {actor}/{class}")))
        };
        let mut drivers = vec![None; keys.len()];
        for c in &self.couplings {
            if !(0.0..=1.0).contains(&c.strength) {
                return Err(Error::CouplingDomain(c.strength));
            }
            let src = lookup(&c.source_actor, c.source_class)?;
            let tgt = lookup(&c.target_actor, c.target_class)?;
            if src == tgt {
                return Err(Error::InvalidSpec(format!(
                    "series {}/{} cannot drive itself",
                    c.source_actor, c.source_class
                )));
            }
            if drivers[tgt].is_some() {
                return Err(Error::MultiDriverUnsupported(format!("{}/{}", c.target_actor, c.target_class)));
            }
            drivers[tgt] = Some((src, c.strength));
        }
        Ok(drivers)
    }

    pub fn validate(&self) -> Result<()> {
        if self.days < 2 {
            return Err(Error::EmptyWindow { days: self.days as i64 });
        }
        let keys = self.series_keys()?;
        self.drivers(&keys).map(|_| ())
    }

    /// Generates every series and the ground-truth ledger.
    pub fn generate(&self) -> Result<Generated> {
        self.validate()?;
        let keys = self.series_keys()?;
        let drivers = self.drivers(&keys)?;
        let days = self.days;

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let words: Vec<Vec<u64>> = keys
            .iter()
            .map(|_| (0..days).map(|_| rng.next_u64()).collect())
            .collect();

        let mut bits = vec![vec![false; days]; keys.len()];
        for (k, w) in words.iter().enumerate() {
            bits[k][0] = w[0] >> 63 == 1;
        }
        for t in 1..days {
            for k in 0..keys.len() {
                let w = words[k][t];
                let base = w >> 63 == 1;
                bits[k][t] = match drivers[k] {
                    Some((d, c)) if ((w & MANTISSA_MASK) as f64 * MANTISSA_SCALE) < c => bits[d][t - 1],
                    _ => base,
                };
            }
        }

        let series = keys
            .into_iter()
            .zip(bits)
            .filter(|(_, b)| b.iter().any(|&x| x))
            .map(|((actor, class), b)| ((actor.clone(), class), BinarySeries::new(actor, class, b)))
            .collect();
        let ledger = GroundTruthLedger {
            edges: self
                .couplings
                .iter()
                .map(|c| {
                    Ok(PlantedEdge {
                        analytic_te: analytic_te(c.strength)?,
                        coupling: c.clone(),
                    })
                })
                .collect::<Result<_>>()?,
        };
        Ok(Generated {
            series,
            ledger,
            window: self.window(),
        })
    }

    /// Two actors with TM series; `driver` feeds `follower` with coupling `strength`.
    pub fn copy_pair(days: usize, strength: f64, seed: u64) -> Self {
        SynthSpec {
            days,
            seed,
            start_date: default_start(),
            groups: vec![
                ActorGroup::new("driver", 1, &[SourceClass::TM]),
                ActorGroup::new("follower", 1, &[SourceClass::TM]),
            ],
            couplings: vec![Coupling::new(
                (&actor_id("driver", 0), SourceClass::TM),
                (&actor_id("follower", 0), SourceClass::TM),
                strength,
            )],
        }
    }

    /// `actors` uncoupled actors, each holding one series per class in `classes`.
    pub fn null_population(actors: usize, classes: &[SourceClass], days: usize, seed: u64) -> Self {
        SynthSpec {
            days,
            seed,
            start_date: default_start(),
            groups: vec![ActorGroup::new("actor", actors, classes)],
            couplings: Vec::new(),
        }
    }

    /// 200 actors where 57 drive from both TM and UM, 3 from TM only, 133
    /// from UM only and 7 drive nothing. At actor level, 57/60 = 95% of
    /// TM-active actors are UM-active and 57/190 = 30% of UM-active actors
    /// are TM-active.
    ///
    /// Every actor also holds TF and UF series; a driver's TM series feeds
    /// the next actor's TF series and its UM series feeds the next actor's UF
    /// series, so no TF or UF series ever drives anything.
    pub fn asymmetric_overlap(days: usize, strength: f64, seed: u64) -> Self {
        use SourceClass::*;
        let groups = vec![
            ActorGroup::new("both", 57, &[TM, TF, UM, UF]),
            ActorGroup::new("quiet", 7, &[TF, UF]),
            ActorGroup::new("tm", 3, &[TM, TF, UF]),
            ActorGroup::new("um", 133, &[TF, UM, UF]),
        ];
        let mut ids: Vec<(String, &[SourceClass])> = groups
            .iter()
            .flat_map(|g| (0..g.count).map(move |i| (g.actor_id(i), g.classes.as_slice())))
            .collect();
        ids.sort();
        let mut couplings = Vec::new();
        for (i, (id, classes)) in ids.iter().enumerate() {
            let next = &ids[(i + 1) % ids.len()].0;
            if classes.contains(&TM) {
                couplings.push(Coupling::new((id, TM), (next, TF), strength));
            }
            if classes.contains(&UM) {
                couplings.push(Coupling::new((id, UM), (next, UF), strength));
            }
        }
        SynthSpec {
            days,
            seed,
            start_date: default_start(),
            groups,
            couplings,
        }
    }

    /// 40 `uniform-*` drivers that each feed one target series of every class,
    /// and 40 `single-*` drivers that each feed exactly one target series.
    /// Source classes rotate through TM, TF, UM, UF; the 50 `target-*` actors
    /// hold one series per class and drive nothing.
    pub fn participation_mix(days: usize, strength: f64, seed: u64) -> Self {
        let all = SourceClass::ALL;
        let mut groups = Vec::new();
        let mut couplings = Vec::new();
        for (g, class) in all.iter().enumerate() {
            groups.push(ActorGroup::new(&format!("uniform-{class}"), 10, &[*class]));
            groups.push(ActorGroup::new(&format!("single-{class}"), 10, &[*class]));
            for i in 0..10 {
                let j = g * 10 + i;
                let uniform = actor_id(&format!("uniform-{class}"), i);
                let target = actor_id("target", j);
                for t in all {
                    couplings.push(Coupling::new((&uniform, *class), (&target, t), strength));
                }
                let single = actor_id(&format!("single-{class}"), i);
                let target = actor_id("target", 40 + j / 4);
                let t = all[(j % 4 + j / 4) % 4];
                couplings.push(Coupling::new((&single, *class), (&target, t), strength));
            }
        }
        groups.push(ActorGroup::new("target", 50, &all));
        SynthSpec {
            days,
            seed,
            start_date: default_start(),
            groups,
            couplings,
        }
    }
}

/// Representative domain, trust score and popularity rank for each class.
pub fn class_source(class: SourceClass) -> (&'static str, f64, u64) {
    match class {
        SourceClass::TM => ("trusted-mainstream.example", 90.0, 1),
        SourceClass::TF => ("trusted-fringe.example", 90.0, 500_000),
        SourceClass::UM => ("untrusted-mainstream.example", 10.0, 2),
        SourceClass::UF => ("untrusted-fringe.example", 10.0, 500_001),
    }
}

/// Events as JSON lines: one share at 12:00 UTC per active day, sorted by
/// actor, day and class.
pub fn events_jsonl(series: &SeriesMap, window: &AnalysisWindow) -> String {
    let mut rows: Vec<(&str, usize, SourceClass)> = series
        .values()
        .flat_map(|s| {
            s.bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(move |(t, _)| (s.actor_id.as_str(), t, s.source_class))
        })
        .collect();
    rows.sort();
    let mut out = String::new();
    for (actor, t, class) in rows {
        let day = window.start + Days::new(t as u64);
        let line = serde_json::json!({
            "actor_id": actor,
            "timestamp": format!("{}T12:00:00Z", day.format("%Y-%m-%d")),
            "url": format!("https://{}/story/{t}", class_source(class).0),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn trust_table_csv() -> String {
    let mut out = String::from("domain,score\n");
    for c in SourceClass::ALL {
        let (domain, score, _) = class_source(c);
        let _ = writeln!(out, "{domain},{score}");
    }
    out
}

pub fn popularity_table_csv() -> String {
    let mut out = String::from("rank,domain\n");
    let mut rows: Vec<(u64, &str)> = SourceClass::ALL
        .iter()
        .map(|&c| (class_source(c).2, class_source(c).0))
        .collect();
    rows.sort();
    for (rank, domain) in rows {
        let _ = writeln!(out, "{rank},{domain}");
    }
    out
}
