//! Directed influence networks between news-sharing actors.
//!
//! The pipeline turns timestamped share events into per-class daily binary
//! activity series, estimates pairwise transfer entropy between them, and
//! arranges the resulting edges into sixteen typed layers. Layers that share a
//! source class form a multiplex network, from which strength, participation
//! and co-occurrence measures are derived.
//!
//! ```text
//! events ──ingest──▶ ClassifiedEvent ──series──▶ SeriesMap
//!        ──te──▶ LayerSet (16 layers) ──multiplex──▶ measures, co-occurrence
//! ```

pub mod error;
pub mod ingest;
pub mod multiplex;
pub(crate) mod numfmt;
pub mod report;
pub mod series;
pub mod synth;
pub mod te;

pub use error::{Error, Result};
pub use ingest::{ClassifyConfig, SourceClass};
pub use multiplex::{CooccurrenceMatrix, CooccurrenceMode, CooccurrenceScope, NodeMeasures};
pub use series::{BinarySeries, SeriesConfig, SeriesMap};
pub use te::{LayerId, LayerNetwork, LayerOptions, LayerSet, LogBase, TeEdge};
