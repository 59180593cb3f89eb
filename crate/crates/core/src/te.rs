//! Plug-in transfer entropy between binary series and the sixteen typed
//! influence layers built from it.
//!
//! With history length one, the estimate for `X → Y` only needs the empirical
//! distribution of the triple `(y[t+1], y[t], x[t])` over `t in 0..T-1`:
//!
//! ```text
//! TE = Σ p(y⁺,y,x) · log2[ p(y⁺,y,x) · p(y) / (p(y,x) · p(y⁺,y)) ]
//! ```
//!
//! [`transfer_entropy`] counts the triples directly. Layer construction uses
//! [`PackedSeries`], which stores each series as 64-bit words so that the
//! eight cell counts fall out of three `AND`/popcount passes per pair.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::SourceClass;
use crate::numfmt::format_sig;
use crate::series::{csv_field, SeriesMap};

/// Unit of the reported transfer entropy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    fn convert(self, bits: f64) -> f64 {
        match self {
            LogBase::Bits => bits,
            LogBase::Nats => bits * std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Bits => "bits",
            LogBase::Nats => "nats",
        }
    }
}

/// Counts of `(y[t+1], y[t], x[t])` triples, indexed `cells[y_next][y][x]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JointCounts {
    pub cells: [[[u64; 2]; 2]; 2],
}

impl JointCounts {
    pub fn get(&self, y_next: bool, y: bool, x: bool) -> u64 {
        self.cells[y_next as usize][y as usize][x as usize]
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().flatten().sum()
    }

    /// Plug-in transfer entropy of these counts, in bits.
    // Indexing mirrors the cell notation c[y_next][y][x].
    #[allow(clippy::needless_range_loop)]
    pub fn transfer_entropy(&self) -> f64 {
        let c = &self.cells;
        let n = self.total();
        if n == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for y in 0..2 {
            let n_y = (c[0][y][0] + c[0][y][1] + c[1][y][0] + c[1][y][1]) as f64;
            for x in 0..2 {
                let n_yx = (c[0][y][x] + c[1][y][x]) as f64;
                for y_next in 0..2 {
                    let cell = c[y_next][y][x];
                    if cell == 0 {
                        continue;
                    }
                    let n_next_y = (c[y_next][y][0] + c[y_next][y][1]) as f64;
                    let cell = cell as f64;
                    sum += cell * ((cell * n_y) / (n_yx * n_next_y)).log2();
                }
            }
        }
        let te = sum / n as f64;
        debug_assert!(te >= -1e-12, "negative transfer entropy {te}");
        te.max(0.0)
    }
}

fn check_lengths(x: usize, y: usize) -> Result<()> {
    if x != y {
        return Err(Error::LengthMismatch { left: x, right: y });
    }
    if x < 2 {
        return Err(Error::SeriesTooShort(x));
    }
    Ok(())
}

/// Tallies the `(y[t+1], y[t], x[t])` triples of a source/target pair.
pub fn joint_counts(x: &[bool], y: &[bool]) -> Result<JointCounts> {
    check_lengths(x.len(), y.len())?;
    let mut counts = JointCounts::default();
    for t in 0..x.len() - 1 {
        counts.cells[y[t + 1] as usize][y[t] as usize][x[t] as usize] += 1;
    }
    Ok(counts)
}

/// Transfer entropy from `x` to `y` in bits.
pub fn transfer_entropy(x: &[bool], y: &[bool]) -> Result<f64> {
    Ok(joint_counts(x, y)?.transfer_entropy())
}

pub fn transfer_entropy_in(x: &[bool], y: &[bool], base: LogBase) -> Result<f64> {
    transfer_entropy(x, y).map(|bits| base.convert(bits))
}

/// A binary series packed for the pairwise kernel.
///
/// `current` holds `bits[0..T-1]` and `next` holds `bits[1..T]`, both
/// word-aligned so bit `t` of `next` is `bits[t + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedSeries {
    current: Vec<u64>,
    next: Vec<u64>,
    transitions: u64,
    ones_current: u64,
    ones_next: u64,
    ones_both: u64,
}

fn pack(bits: impl ExactSizeIterator<Item = bool>) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64)];
    for (i, b) in bits.enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

impl PackedSeries {
    pub fn new(bits: &[bool]) -> Result<Self> {
        if bits.len() < 2 {
            return Err(Error::SeriesTooShort(bits.len()));
        }
        let n = bits.len() - 1;
        let current = pack(bits[..n].iter().copied());
        let next = pack(bits[1..].iter().copied());
        let ones_both = current
            .iter()
            .zip(&next)
            .map(|(c, n)| (c & n).count_ones() as u64)
            .sum();
        Ok(PackedSeries {
            ones_current: popcount(&current),
            ones_next: popcount(&next),
            ones_both,
            transitions: n as u64,
            current,
            next,
        })
    }

    /// Original series length `T`.
    pub fn len(&self) -> usize {
        self.transitions as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Joint counts for `self → target`.
    pub fn counts_to(&self, target: &PackedSeries) -> Result<JointCounts> {
        check_lengths(self.len(), target.len())?;
        Ok(self.counts_to_unchecked(target))
    }

    fn counts_to_unchecked(&self, target: &PackedSeries) -> JointCounts {
        let (mut next_x, mut cur_x, mut all_x) = (0u64, 0u64, 0u64);
        for ((&x, &yc), &yn) in self.current.iter().zip(&target.current).zip(&target.next) {
            next_x += (yn & x).count_ones() as u64;
            cur_x += (yc & x).count_ones() as u64;
            all_x += (yn & yc & x).count_ones() as u64;
        }
        let n = self.transitions;
        let (a, b, c) = (target.ones_next, target.ones_current, self.ones_current);
        let ab = target.ones_both;
        // Inclusion-exclusion over the three indicator vectors.
        let mut cells = [[[0u64; 2]; 2]; 2];
        cells[1][1][1] = all_x;
        cells[1][1][0] = ab - all_x;
        cells[1][0][1] = next_x - all_x;
        cells[0][1][1] = cur_x - all_x;
        cells[1][0][0] = a + all_x - ab - next_x;
        cells[0][1][0] = b + all_x - ab - cur_x;
        cells[0][0][1] = c + all_x - next_x - cur_x;
        cells[0][0][0] = n + ab + next_x + cur_x - a - b - c - all_x;
        JointCounts { cells }
    }

    /// Transfer entropy `self → target` in bits.
    pub fn transfer_entropy_to(&self, target: &PackedSeries) -> Result<f64> {
        Ok(self.counts_to(target)?.transfer_entropy())
    }
}

/// Crossover type of a layer, from which of trust and popularity differ
/// between the source and target class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverClass {
    Echochamber,
    Credibility,
    Audience,
    CredibilityAndAudience,
}

impl CrossoverClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossoverClass::Echochamber => "echochamber",
            CrossoverClass::Credibility => "credibility crossover",
            CrossoverClass::Audience => "audience crossover",
            CrossoverClass::CredibilityAndAudience => "credibility and audience crossover",
        }
    }
}

impl fmt::Display for CrossoverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ordered `(source class, target class)` pair naming one of the sixteen layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LayerId {
    pub source: SourceClass,
    pub target: SourceClass,
}

impl LayerId {
    pub fn new(source: SourceClass, target: SourceClass) -> Self {
        LayerId { source, target }
    }

    /// All sixteen layers, source-major in class order.
    pub fn all() -> impl Iterator<Item = LayerId> {
        SourceClass::ALL
            .into_iter()
            .flat_map(|s| SourceClass::ALL.into_iter().map(move |t| LayerId::new(s, t)))
    }

    /// Position in [`LayerId::all`].
    pub fn index(self) -> usize {
        self.source.index() * 4 + self.target.index()
    }

    pub fn crossover(self) -> CrossoverClass {
        let trust_flips = self.source.is_trustworthy() != self.target.is_trustworthy();
        let popularity_flips = self.source.is_mainstream() != self.target.is_mainstream();
        match (trust_flips, popularity_flips) {
            (false, false) => CrossoverClass::Echochamber,
            (true, false) => CrossoverClass::Credibility,
            (false, true) => CrossoverClass::Audience,
            (true, true) => CrossoverClass::CredibilityAndAudience,
        }
    }

    pub fn file_name(self) -> String {
        format!("layer_{}_{}.csv", self.source, self.target)
    }
}

impl fmt::Display for LayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.source, self.target)
    }
}

/// Directed edge between two actors, identified by their index in the
/// owning [`LayerSet`]'s actor table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeEdge {
    pub source: u32,
    pub target: u32,
    pub weight: f64,
}

/// One typed layer. Edges are sorted by `(source, target)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerNetwork {
    pub id: LayerId,
    pub edges: Vec<TeEdge>,
}

impl LayerNetwork {
    pub fn empty(id: LayerId) -> Self {
        LayerNetwork { id, edges: Vec::new() }
    }

    pub fn crossover(&self) -> CrossoverClass {
        self.id.crossover()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges leaving `actor`, relying on the sorted edge order.
    pub fn outgoing(&self, actor: u32) -> &[TeEdge] {
        let lo = self.edges.partition_point(|e| e.source < actor);
        let hi = self.edges.partition_point(|e| e.source <= actor);
        &self.edges[lo..hi]
    }
}

/// `(source_actor, target_actor, weight)` as read from a layer file.
type RawEdge = (String, String, f64);

/// All sixteen layers over a shared, sorted actor table.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSet {
    pub actors: Vec<String>,
    pub layers: Vec<LayerNetwork>,
    pub log_base: LogBase,
}

impl LayerSet {
    /// Sixteen empty layers.
    pub fn empty(actors: Vec<String>) -> Self {
        LayerSet {
            actors,
            layers: LayerId::all().map(LayerNetwork::empty).collect(),
            log_base: LogBase::Bits,
        }
    }

    pub fn layer(&self, id: LayerId) -> &LayerNetwork {
        &self.layers[id.index()]
    }

    pub fn actor_index(&self, actor_id: &str) -> Option<u32> {
        self.actors
            .binary_search_by(|a| a.as_str().cmp(actor_id))
            .ok()
            .map(|i| i as u32)
    }

    pub fn actor_name(&self, index: u32) -> &str {
        &self.actors[index as usize]
    }

    pub fn total_edges(&self) -> usize {
        self.layers.iter().map(LayerNetwork::len).sum()
    }

    /// Rounds every weight to the 12 significant digits written by
    /// [`LayerSet::write_layer_csv`], so that anything derived afterwards can
    /// be recomputed exactly from the exported files.
    pub fn round_to_export_precision(&mut self) {
        for layer in &mut self.layers {
            for e in &mut layer.edges {
                e.weight = format_sig(e.weight, 12).parse().expect("formatted weight parses");
            }
        }
    }

    /// Writes `layer_<SRC>_<TGT>.csv` for every layer into `dir`.
    pub fn write_csv_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for layer in &self.layers {
            let path = dir.join(layer.id.file_name());
            let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            let mut w = BufWriter::new(file);
            self.write_layer_csv(layer, &mut w).map_err(|e| Error::io(&path, e))?;
            w.flush().map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    pub fn write_layer_csv(&self, layer: &LayerNetwork, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "source_actor,target_actor,source_class,target_class,te_{}", self.log_base.unit())?;
        for e in &layer.edges {
            writeln!(
                w,
                "{},{},{},{},{}",
                csv_field(self.actor_name(e.source)),
                csv_field(self.actor_name(e.target)),
                layer.id.source,
                layer.id.target,
                format_sig(e.weight, 12)
            )?;
        }
        Ok(())
    }

    /// Reads the sixteen layer files written by [`LayerSet::write_csv_dir`].
    pub fn read_csv_dir(dir: &Path) -> Result<Self> {
        let mut raw: Vec<(LayerId, Vec<RawEdge>)> = Vec::new();
        let mut log_base = LogBase::Bits;
        for id in LayerId::all() {
            let path = dir.join(id.file_name());
            if !path.is_file() {
                return Err(Error::Config(format!("missing layer file {}", path.display())));
            }
            let mut reader = csv::Reader::from_path(&path).map_err(|e| Error::parse(&path, 0, e.to_string()))?;
            let headers = reader.headers().map_err(|e| Error::parse(&path, 1, e.to_string()))?.clone();
            if headers.get(4) == Some("te_nats") {
                log_base = LogBase::Nats;
            }
            let mut rows = Vec::new();
            for record in reader.records() {
                let record = record.map_err(|e| Error::parse(&path, 0, e.to_string()))?;
                let line = record.position().map_or(0, |p| p.line());
                if record.len() != 5 {
                    return Err(Error::parse(&path, line, "expected 5 columns"));
                }
                if record[2] != *id.source.as_str() || record[3] != *id.target.as_str() {
                    return Err(Error::parse(&path, line, format!("row does not belong to layer {id}")));
                }
                let weight: f64 = record[4]
                    .parse()
                    .map_err(|_| Error::parse(&path, line, format!("invalid weight {:?}", &record[4])))?;
                rows.push((record[0].to_string(), record[1].to_string(), weight));
            }
            raw.push((id, rows));
        }

        let mut actors: Vec<String> = raw
            .iter()
            .flat_map(|(_, rows)| rows.iter().flat_map(|(s, t, _)| [s.clone(), t.clone()]))
            .collect();
        actors.sort();
        actors.dedup();
        let mut set = LayerSet::empty(actors);
        set.log_base = log_base;
        for (id, rows) in raw {
            let mut edges: Vec<TeEdge> = rows
                .into_iter()
                .map(|(s, t, weight)| TeEdge {
                    source: set.actor_index(&s).expect("actor table built from rows"),
                    target: set.actor_index(&t).expect("actor table built from rows"),
                    weight,
                })
                .collect();
            edges.sort_by_key(|e| (e.source, e.target));
            set.layers[id.index()].edges = edges;
        }
        Ok(set)
    }
}

/// Edge inclusion rules for layer construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerOptions {
    /// Edges need `TE > te_min`, compared in bits regardless of `log_base`.
    pub te_min: f64,
    pub log_base: LogBase,
    /// When non-zero, an edge must also exceed the 99th percentile of this
    /// many source-shuffled surrogates.
    pub permutations: usize,
    pub seed: u64,
}

impl Default for LayerOptions {
    fn default() -> Self {
        LayerOptions {
            te_min: 1e-6,
            log_base: LogBase::Bits,
            permutations: 0,
            seed: 0,
        }
    }
}

struct IndexedSeries {
    actor: u32,
    bits: Vec<bool>,
    packed: PackedSeries,
}

/// Packed view of a [`SeriesMap`] from which layers are built.
pub struct LayerBuilder {
    actors: Vec<String>,
    by_class: [Vec<IndexedSeries>; 4],
}

impl LayerBuilder {
    /// Validates that every series has the same length `T >= 2`.
    pub fn new(series: &SeriesMap) -> Result<Self> {
        let mut actors: Vec<String> = series.keys().map(|(a, _)| a.clone()).collect();
        actors.dedup();
        let mut by_class: [Vec<IndexedSeries>; 4] = Default::default();
        let mut expected_len = None;
        let mut actor_idx = 0u32;
        let mut prev_actor: Option<&str> = None;
        for ((actor, class), s) in series {
            if let Some(prev) = prev_actor {
                if prev != actor {
                    actor_idx += 1;
                }
            }
            prev_actor = Some(actor);
            match expected_len {
                None => expected_len = Some(s.len()),
                Some(len) if len != s.len() => {
                    return Err(Error::LengthMismatch { left: len, right: s.len() })
                }
                _ => {}
            }
            by_class[class.index()].push(IndexedSeries {
                actor: actor_idx,
                bits: s.bits.clone(),
                packed: PackedSeries::new(&s.bits)?,
            });
        }
        Ok(LayerBuilder { actors, by_class })
    }

    pub fn actors(&self) -> &[String] {
        &self.actors
    }

    /// Builds one layer. Pairs of series that belong to the same actor are skipped.
    pub fn build_layer(&self, source: SourceClass, target: SourceClass, opts: &LayerOptions) -> LayerNetwork {
        let id = LayerId::new(source, target);
        let sources = &self.by_class[source.index()];
        let targets = &self.by_class[target.index()];
        let per_source: Vec<Vec<TeEdge>> = sources
            .par_iter()
            .map(|src| {
                targets
                    .iter()
                    .filter(|tgt| tgt.actor != src.actor)
                    .filter_map(|tgt| {
                        let bits = src.packed.counts_to_unchecked(&tgt.packed).transfer_entropy();
                        if bits <= opts.te_min {
                            return None;
                        }
                        if opts.permutations > 0 && !passes_permutation_test(id, src, tgt, bits, opts) {
                            return None;
                        }
                        Some(TeEdge {
                            source: src.actor,
                            target: tgt.actor,
                            weight: opts.log_base.convert(bits),
                        })
                    })
                    .collect()
            })
            .collect();
        LayerNetwork {
            id,
            edges: per_source.concat(),
        }
    }

    /// Builds all sixteen layers in [`LayerId::all`] order.
    pub fn build_all(&self, opts: &LayerOptions) -> LayerSet {
        LayerSet {
            actors: self.actors.clone(),
            layers: LayerId::all()
                .map(|id| self.build_layer(id.source, id.target, opts))
                .collect(),
            log_base: opts.log_base,
        }
    }
}

fn pair_seed(seed: u64, layer: LayerId, source: u32, target: u32) -> u64 {
    seed ^ ((layer.index() as u64) << 58) ^ ((source as u64) << 29) ^ target as u64
}

fn passes_permutation_test(
    layer: LayerId,
    src: &IndexedSeries,
    tgt: &IndexedSeries,
    observed: f64,
    opts: &LayerOptions,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(pair_seed(opts.seed, layer, src.actor, tgt.actor));
    let mut shuffled = src.bits.clone();
    let mut null: Vec<f64> = (0..opts.permutations)
        .map(|_| {
            shuffled.shuffle(&mut rng);
            let packed = PackedSeries::new(&shuffled).expect("length checked at construction");
            packed.counts_to_unchecked(&tgt.packed).transfer_entropy()
        })
        .collect();
    null.sort_by(f64::total_cmp);
    let rank = ((0.99 * null.len() as f64).ceil() as usize).clamp(1, null.len());
    observed > null[rank - 1]
}

/// Builds all sixteen layers from a series map.
pub fn build_all_layers(series: &SeriesMap, opts: &LayerOptions) -> Result<LayerSet> {
    Ok(LayerBuilder::new(series)?.build_all(opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{parse_bits, BinarySeries};

    fn b(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn joint_counts_examples() {
        let c = joint_counts(&b("01"), &b("10")).unwrap();
        assert_eq!(c.cells[0][1][0], 1);
        assert_eq!(c.total(), 1);

        let c = joint_counts(&b("000"), &b("000")).unwrap();
        assert_eq!(c.cells[0][0][0], 2);
        assert_eq!(c.total(), 2);
    }

    #[test]
    fn joint_counts_errors() {
        assert!(matches!(
            joint_counts(&b("010"), &b("01")),
            Err(Error::LengthMismatch { left: 3, right: 2 })
        ));
        assert!(matches!(joint_counts(&b("0"), &b("1")), Err(Error::SeriesTooShort(1))));
    }

    #[test]
    fn constant_series_have_zero_te() {
        assert_eq!(transfer_entropy(&b("0000"), &b("0000")).unwrap(), 0.0);
        assert_eq!(transfer_entropy(&b("1111"), &b("0101")).unwrap(), 0.0);
    }

    #[test]
    fn packed_matches_scalar_counts_across_word_boundaries() {
        for len in [2usize, 3, 63, 64, 65, 66, 129, 200] {
            let x: Vec<bool> = (0..len).map(|i| (i * 7 + 3) % 5 < 2).collect();
            let y: Vec<bool> = (0..len).map(|i| (i * 11 + 1) % 3 == 0).collect();
            let px = PackedSeries::new(&x).unwrap();
            let py = PackedSeries::new(&y).unwrap();
            assert_eq!(px.counts_to(&py).unwrap(), joint_counts(&x, &y).unwrap(), "len {len}");
            assert_eq!(py.counts_to(&px).unwrap(), joint_counts(&y, &x).unwrap(), "len {len}");
        }
    }

    #[test]
    fn nats_scale_bits() {
        let x = b("0110100111");
        let y = b("0011010011");
        let bits = transfer_entropy(&x, &y).unwrap();
        let nats = transfer_entropy_in(&x, &y, LogBase::Nats).unwrap();
        assert!((nats - bits * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn crossover_table() {
        use CrossoverClass::*;
        use SourceClass::*;
        let expected = [
            (TM, TM, Echochamber),
            (TF, TF, Echochamber),
            (UM, UM, Echochamber),
            (UF, UF, Echochamber),
            (TM, UM, Credibility),
            (TF, UF, Credibility),
            (UM, TM, Credibility),
            (UF, TF, Credibility),
            (TM, TF, Audience),
            (UM, UF, Audience),
            (TF, TM, Audience),
            (UF, UM, Audience),
            (TM, UF, CredibilityAndAudience),
            (TF, UM, CredibilityAndAudience),
            (UM, TF, CredibilityAndAudience),
            (UF, TM, CredibilityAndAudience),
        ];
        for (s, t, class) in expected {
            assert_eq!(LayerId::new(s, t).crossover(), class, "{s}->{t}");
        }
        let ids: Vec<LayerId> = LayerId::all().collect();
        assert_eq!(ids.len(), 16);
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
        assert!(ids.iter().enumerate().all(|(i, id)| id.index() == i));
    }

    fn map(entries: &[(&str, SourceClass, &str)]) -> SeriesMap {
        entries
            .iter()
            .map(|&(a, c, bits)| ((a.to_string(), c), BinarySeries::new(a, c, b(bits))))
            .collect()
    }

    #[test]
    fn single_actor_has_no_edges() {
        let m = map(&[("a", SourceClass::TM, "0110")]);
        let set = build_all_layers(&m, &LayerOptions::default()).unwrap();
        assert_eq!(set.total_edges(), 0);
        assert_eq!(set.layers.len(), 16);
    }

    #[test]
    fn same_actor_cross_class_pairs_are_excluded() {
        let m = map(&[("a", SourceClass::TM, "0110100"), ("a", SourceClass::UM, "0011010")]);
        let set = build_all_layers(&m, &LayerOptions::default()).unwrap();
        assert_eq!(set.total_edges(), 0);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let m = map(&[("a", SourceClass::TM, "0110"), ("b", SourceClass::TM, "01100")]);
        assert!(matches!(LayerBuilder::new(&m), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn outgoing_slices_sorted_edges() {
        let layer = LayerNetwork {
            id: LayerId::new(SourceClass::TM, SourceClass::TM),
            edges: vec![
                TeEdge { source: 0, target: 1, weight: 0.1 },
                TeEdge { source: 2, target: 0, weight: 0.2 },
                TeEdge { source: 2, target: 1, weight: 0.3 },
            ],
        };
        assert_eq!(layer.outgoing(2).len(), 2);
        assert!(layer.outgoing(1).is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let m = map(&[
            ("a", SourceClass::TM, "0110100111010"),
            ("b", SourceClass::TM, "0011010011101"),
            ("c,d", SourceClass::UF, "1001101100110"),
        ]);
        let set = build_all_layers(&m, &LayerOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        set.write_csv_dir(dir.path()).unwrap();
        let back = LayerSet::read_csv_dir(dir.path()).unwrap();
        assert_eq!(back.actors, set.actors);
        for (l, r) in set.layers.iter().zip(&back.layers) {
            assert_eq!(l.len(), r.len());
            for (a, b) in l.edges.iter().zip(&r.edges) {
                assert_eq!((a.source, a.target), (b.source, b.target));
                assert!((a.weight - b.weight).abs() <= 1e-11 * a.weight.abs().max(1e-300));
            }
        }
        let text = fs::read_to_string(dir.path().join("layer_TM_TM.csv")).unwrap();
        assert!(text.starts_with("source_actor,target_actor,source_class,target_class,te_bits\n"));
    }

    #[test]
    fn read_csv_dir_requires_all_layers() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(LayerSet::read_csv_dir(dir.path()), Err(Error::Config(_))));
    }
}
