//! Multiplex measures over the typed layers.
//!
//! The four layers that share a source class form one multiplex network. For
//! an actor `i` the layer strength `k[α]` is the total outgoing edge weight in
//! layer `α`, the multiplex strength `o` is the sum over the four layers, and
//! the participation coefficient
//!
//! ```text
//! P = M / (M - 1) · (1 - Σ_α (k[α] / o)²)
//! ```
//!
//! is 0 when all influence goes to one target class and 1 when it is spread
//! evenly over all `M = 4`.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::SourceClass;
use crate::numfmt::format_sig;
use crate::series::csv_field;
use crate::te::{LayerId, LayerNetwork, LayerSet};

/// Layers per multiplex network.
pub const LAYERS: usize = 4;

/// Total outgoing weight of `actor` in `layer`, summed in target order.
pub fn layer_strength(layer: &LayerNetwork, actor: u32) -> f64 {
    layer.outgoing(actor).iter().fold(0.0, |acc, e| acc + e.weight)
}

/// The four layers with a common source class, indexed by target class.
#[derive(Debug, Clone, Copy)]
pub struct MultiplexNetwork<'a> {
    pub source_class: SourceClass,
    pub layers: [&'a LayerNetwork; LAYERS],
}

impl<'a> MultiplexNetwork<'a> {
    pub fn new(set: &'a LayerSet, source_class: SourceClass) -> Self {
        MultiplexNetwork {
            source_class,
            layers: SourceClass::ALL.map(|t| set.layer(LayerId::new(source_class, t))),
        }
    }

    pub fn layer_strengths(&self, actor: u32) -> [f64; LAYERS] {
        self.layers.map(|l| layer_strength(l, actor))
    }
}

fn sum_strengths(k: &[f64; LAYERS]) -> f64 {
    k.iter().fold(0.0, |acc, v| acc + v)
}

/// Multiplex strength `o`: the layer strengths summed in class order.
pub fn multiplex_strength(mux: &MultiplexNetwork<'_>, actor: u32) -> f64 {
    sum_strengths(&mux.layer_strengths(actor))
}

/// Participation coefficient of a layer-strength vector with `M = k.len()` layers.
pub fn participation_coefficient(k: &[f64]) -> Result<f64> {
    let m = k.len();
    if m < 2 {
        return Err(Error::Config(format!("participation needs at least 2 layers, got {m}")));
    }
    let o: f64 = k.iter().fold(0.0, |acc, v| acc + v);
    if o <= 0.0 {
        return Err(Error::ZeroStrength);
    }
    let concentration: f64 = k.iter().map(|&v| (v / o) * (v / o)).sum();
    let m = m as f64;
    Ok((m / (m - 1.0) * (1.0 - concentration)).max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMeasures {
    pub actor_id: String,
    pub source_class: SourceClass,
    /// Layer strengths in target-class order TM, TF, UM, UF.
    pub k: [f64; LAYERS],
    pub o: f64,
    pub participation: f64,
}

/// One multiplex and its ranked node measures.
#[derive(Debug, Clone)]
pub struct Multiplex<'a> {
    pub network: MultiplexNetwork<'a>,
    /// Actors with `o > 0`, by `o` descending then actor id ascending.
    pub measures: Vec<NodeMeasures>,
}

impl Multiplex<'_> {
    pub fn source_class(&self) -> SourceClass {
        self.network.source_class
    }

    pub fn measures_csv(&self) -> String {
        let mut out = String::from("actor_id,source_class,k_TM,k_TF,k_UM,k_UF,o,participation\n");
        for m in &self.measures {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                csv_field(&m.actor_id),
                m.source_class,
                format_sig(m.k[0], 12),
                format_sig(m.k[1], 12),
                format_sig(m.k[2], 12),
                format_sig(m.k[3], 12),
                format_sig(m.o, 12),
                format_sig(m.participation, 12),
            );
        }
        out
    }
}

/// Computes measures for one multiplex.
pub fn node_measures(set: &LayerSet, mux: &MultiplexNetwork<'_>) -> Vec<NodeMeasures> {
    let mut k = vec![[0.0f64; LAYERS]; set.actors.len()];
    for (alpha, layer) in mux.layers.iter().enumerate() {
        // Edges are sorted by (source, target), matching layer_strength's order.
        for e in &layer.edges {
            k[e.source as usize][alpha] += e.weight;
        }
    }
    let mut rows: Vec<NodeMeasures> = k
        .into_iter()
        .enumerate()
        .filter_map(|(i, k)| {
            let o = sum_strengths(&k);
            if o <= 0.0 {
                return None;
            }
            let participation = participation_coefficient(&k).expect("o > 0");
            Some(NodeMeasures {
                actor_id: set.actors[i].clone(),
                source_class: mux.source_class,
                k,
                o,
                participation,
            })
        })
        .collect();
    rows.sort_by(|a, b| b.o.total_cmp(&a.o).then_with(|| a.actor_id.cmp(&b.actor_id)));
    rows
}

/// One multiplex per source class, in class order.
pub fn build_multiplexes(set: &LayerSet) -> Vec<Multiplex<'_>> {
    SourceClass::ALL
        .into_iter()
        .map(|c| {
            let network = MultiplexNetwork::new(set, c);
            let measures = node_measures(set, &network);
            Multiplex { network, measures }
        })
        .collect()
}

/// What counts as co-activity between two layers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CooccurrenceMode {
    /// The same ordered actor pair has an edge in both.
    EdgeLevel,
    /// The same actor has an outgoing edge in both.
    #[default]
    ActorLevel,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CooccurrenceScope {
    /// One row/column per layer (16×16).
    Layer16,
    /// Each source class's four layers merged into one (4×4).
    #[default]
    Aggregated4,
}

impl CooccurrenceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CooccurrenceMode::EdgeLevel => "edge_level",
            CooccurrenceMode::ActorLevel => "actor_level",
        }
    }
}

impl CooccurrenceScope {
    pub fn as_str(self) -> &'static str {
        match self {
            CooccurrenceScope::Layer16 => "layer16",
            CooccurrenceScope::Aggregated4 => "aggregated4",
        }
    }
}

impl fmt::Display for CooccurrenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for CooccurrenceScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CooccurrenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "edge_level" => Ok(CooccurrenceMode::EdgeLevel),
            "actor_level" => Ok(CooccurrenceMode::ActorLevel),
            other => Err(Error::Config(format!("unknown co-occurrence mode {other:?}"))),
        }
    }
}

impl FromStr for CooccurrenceScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "layer16" => Ok(CooccurrenceScope::Layer16),
            "aggregated4" => Ok(CooccurrenceScope::Aggregated4),
            other => Err(Error::Config(format!("unknown co-occurrence scope {other:?}"))),
        }
    }
}

/// Conditional co-activity matrix: entry `(row, col)` is the fraction of
/// activity in `row` that is also present in `col`. Rows whose conditioning
/// set is empty are `None` throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceMatrix {
    pub mode: CooccurrenceMode,
    pub scope: CooccurrenceScope,
    pub labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl CooccurrenceMatrix {
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.values[row][col]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Entry by row and column label, e.g. `("TM*", "UM*")` or `("TM->TM", "UM->TF")`.
    pub fn entry(&self, given: &str, also: &str) -> Option<f64> {
        self.get(self.index_of(given)?, self.index_of(also)?)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// CSV with a header row and a leading label column; undefined cells are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("given");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.values) {
            out.push_str(label);
            for v in row {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&format_sig(*v, 12));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn edge_key(source: u32, target: u32) -> u64 {
    ((source as u64) << 32) | target as u64
}

fn activity(layers: &[&LayerNetwork], mode: CooccurrenceMode) -> Vec<u64> {
    let mut keys: Vec<u64> = layers
        .iter()
        .flat_map(|l| l.edges.iter())
        .map(|e| match mode {
            CooccurrenceMode::EdgeLevel => edge_key(e.source, e.target),
            CooccurrenceMode::ActorLevel => e.source as u64,
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys
}

fn intersection_len(a: &[u64], b: &[u64]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Pairwise conditional co-occurrence between layers or source classes.
pub fn cooccurrence(set: &LayerSet, mode: CooccurrenceMode, scope: CooccurrenceScope) -> CooccurrenceMatrix {
    let (labels, sets): (Vec<String>, Vec<Vec<u64>>) = match scope {
        CooccurrenceScope::Layer16 => set
            .layers
            .iter()
            .map(|l| (l.id.to_string(), activity(&[l], mode)))
            .unzip(),
        CooccurrenceScope::Aggregated4 => SourceClass::ALL
            .into_iter()
            .map(|c| {
                let mux = MultiplexNetwork::new(set, c);
                (format!("{c}*"), activity(&mux.layers, mode))
            })
            .unzip(),
    };
    let values = sets
        .iter()
        .map(|given| {
            sets.iter()
                .map(|also| {
                    (!given.is_empty()).then(|| intersection_len(given, also) as f64 / given.len() as f64)
                })
                .collect()
        })
        .collect();
    CooccurrenceMatrix {
        mode,
        scope,
        labels,
        values,
    }
}
