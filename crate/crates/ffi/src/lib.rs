//! C ABI for teplex.
//!
//! Every fallible function returns a [`TeplexStatus`]; on anything other than
//! `TEPLEX_STATUS_OK` a description is available from
//! [`teplex_last_error_message`] on the same thread. Results are written
//! through out-pointers. Objects are opaque handles created by `*_new` /
//! `*_build` and released with the matching `*_free`.
//!
//! Source classes are passed as the strings `"TM"`, `"TF"`, `"UM"`, `"UF"`
//! and binary series as one byte per day (zero = inactive).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use teplex::multiplex::{self, MultiplexNetwork};
use teplex::report::{self, RunConfig};
use teplex::series::SeriesMap;
use teplex::te::LayerBuilder;
use teplex::{
    BinarySeries, CooccurrenceMode, CooccurrenceScope, Error, LayerId, LayerOptions, LayerSet, SourceClass,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TeplexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LengthMismatch = 3,
    ZeroStrength = 4,
    NotFound = 5,
    ConfigError = 6,
    DataError = 7,
    InternalError = 8,
}

/// Co-occurrence counted over (source, target) edges.
pub const TEPLEX_MODE_EDGE_LEVEL: u32 = 0;
/// Co-occurrence counted over active source actors.
pub const TEPLEX_MODE_ACTOR_LEVEL: u32 = 1;
/// One row per layer (16 × 16).
pub const TEPLEX_SCOPE_LAYER16: u32 = 0;
/// One row per source class (4 × 4).
pub const TEPLEX_SCOPE_AGGREGATED4: u32 = 1;

/// A directed edge; `source` and `target` index the layer set's actor table.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TeplexEdge {
    pub source: u32,
    pub target: u32,
    pub weight: f64,
}

/// Binary series keyed by (actor, class), filled with [`teplex_series_set_add`].
pub struct TeplexSeriesSet {
    series: SeriesMap,
}

/// The sixteen typed layers built from a series set.
pub struct TeplexLayerSet {
    set: LayerSet,
    names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).expect("nul bytes removed"));
}

struct Failure(TeplexStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::LengthMismatch { .. } => TeplexStatus::LengthMismatch,
            Error::ZeroStrength => TeplexStatus::ZeroStrength,
            Error::Config(_) | Error::CouplingDomain(_) => TeplexStatus::InvalidArgument,
            Error::SeriesTooShort(_) | Error::EmptyWindow { .. } => TeplexStatus::InvalidArgument,
            _ => TeplexStatus::DataError,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: TeplexStatus, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, message.into()))
}

/// Runs `f`, recording any error or panic for [`teplex_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TeplexStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            TeplexStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            TeplexStatus::InternalError
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        fail(TeplexStatus::NullPointer, format!("{name} is null"))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(TeplexStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

/// # Safety
/// `p` must be null or point to `len` readable bytes.
unsafe fn bits_arg(p: *const u8, len: usize, name: &str) -> Result<Vec<bool>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    non_null(p, name)?;
    Ok(slice::from_raw_parts(p, len).iter().map(|&b| b != 0).collect())
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn class_arg(p: *const c_char, name: &str) -> Result<SourceClass, Failure> {
    let s = str_arg(p, name)?;
    s.parse()
        .or_else(|_| fail(TeplexStatus::InvalidArgument, format!("{name}: unknown source class {s:?}")))
}

/// # Safety
/// `p` must be null or a handle from the matching constructor that has not been freed.
unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    non_null(p, name)?;
    Ok(&*p)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn teplex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message from the most recent call on this thread; empty if that call
/// succeeded. The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn teplex_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Transfer entropy in bits from `x` to `y`, both `len` bytes long.
///
/// # Safety
/// `x` and `y` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_transfer_entropy(
    x: *const u8,
    y: *const u8,
    len: usize,
    out: *mut f64,
) -> TeplexStatus {
    guard(|| {
        non_null(out, "out")?;
        let x = bits_arg(x, len, "x")?;
        let y = bits_arg(y, len, "y")?;
        if len < 2 {
            return fail(TeplexStatus::InvalidArgument, "series need at least 2 days");
        }
        *out = teplex::te::transfer_entropy(&x, &y)?;
        Ok(())
    })
}

/// Closed-form transfer entropy `1 - H_b((1 + c) / 2)` of a copy coupling of strength `c`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_analytic_te(c: f64, out: *mut f64) -> TeplexStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = teplex::synth::analytic_te(c)?;
        Ok(())
    })
}

/// Participation coefficient of `m` layer strengths.
///
/// # Safety
/// `k` must point to `m` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_participation_coefficient(k: *const f64, m: usize, out: *mut f64) -> TeplexStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(k, "k")?;
        *out = multiplex::participation_coefficient(slice::from_raw_parts(k, m))?;
        Ok(())
    })
}

/// New empty series set. Never returns null.
#[no_mangle]
pub extern "C" fn teplex_series_set_new() -> *mut TeplexSeriesSet {
    Box::into_raw(Box::new(TeplexSeriesSet {
        series: SeriesMap::new(),
    }))
}

/// # Safety
/// `set` must be null or a handle from [`teplex_series_set_new`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn teplex_series_set_free(set: *mut TeplexSeriesSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Adds or replaces the series of `actor` in `class`. All series in a set
/// must have the same length.
///
/// # Safety
/// `set` must be a live handle, `actor` and `class` NUL-terminated strings,
/// and `bits` must point to `len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn teplex_series_set_add(
    set: *mut TeplexSeriesSet,
    actor: *const c_char,
    class: *const c_char,
    bits: *const u8,
    len: usize,
) -> TeplexStatus {
    guard(|| {
        non_null(set, "set")?;
        let set = &mut *set;
        let actor = str_arg(actor, "actor")?;
        let class = class_arg(class, "class")?;
        let bits = bits_arg(bits, len, "bits")?;
        if len < 2 {
            return fail(TeplexStatus::InvalidArgument, "series need at least 2 days");
        }
        if let Some(existing) = set.series.values().next() {
            if existing.len() != len {
                return Err(Error::LengthMismatch {
                    left: existing.len(),
                    right: len,
                }
                .into());
            }
        }
        set.series
            .insert((actor.to_string(), class), BinarySeries::new(actor, class, bits));
        Ok(())
    })
}

/// Builds all sixteen layers, keeping edges with TE above `te_min` bits.
///
/// # Safety
/// `series` must be a live handle and `out` writable. On success `*out`
/// receives a handle to release with [`teplex_layer_set_free`].
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_build(
    series: *const TeplexSeriesSet,
    te_min: f64,
    out: *mut *mut TeplexLayerSet,
) -> TeplexStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let series = handle(series, "series")?;
        if !(te_min.is_finite() && te_min >= 0.0) {
            return fail(TeplexStatus::InvalidArgument, "te_min must be a finite value >= 0");
        }
        let opts = LayerOptions {
            te_min,
            ..LayerOptions::default()
        };
        let set = LayerBuilder::new(&series.series)?.build_all(&opts);
        let names = set
            .actors
            .iter()
            .map(|a| CString::new(a.as_str()))
            .collect::<Result<_, _>>()
            .or_else(|_| fail(TeplexStatus::InvalidArgument, "actor id contains a NUL byte"))?;
        *out = Box::into_raw(Box::new(TeplexLayerSet { set, names }));
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle from [`teplex_layer_set_build`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_free(set: *mut TeplexLayerSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of actors in the layer set's actor table.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_actor_count(set: *const TeplexLayerSet, out: *mut usize) -> TeplexStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = handle(set, "set")?.names.len();
        Ok(())
    })
}

/// Actor id at `index`, or null when out of range. The string is owned by
/// the layer set.
///
/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_actor_name(set: *const TeplexLayerSet, index: usize) -> *const c_char {
    match set.as_ref().and_then(|s| s.names.get(index)) {
        Some(name) => name.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `set` must be a live handle; class arguments NUL-terminated strings.
unsafe fn layer_of<'a>(
    set: *const TeplexLayerSet,
    source: *const c_char,
    target: *const c_char,
) -> Result<&'a teplex::LayerNetwork, Failure> {
    let set = handle(set, "set")?;
    let id = LayerId::new(class_arg(source, "source_class")?, class_arg(target, "target_class")?);
    Ok(set.set.layer(id))
}

/// Number of edges in the layer `source_class -> target_class`.
///
/// # Safety
/// `set` must be a live handle, class arguments NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_edge_count(
    set: *const TeplexLayerSet,
    source_class: *const c_char,
    target_class: *const c_char,
    out: *mut usize,
) -> TeplexStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = layer_of(set, source_class, target_class)?.len();
        Ok(())
    })
}

/// Edge `index` of a layer, in (source, target) order.
///
/// # Safety
/// `set` must be a live handle, class arguments NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_edge(
    set: *const TeplexLayerSet,
    source_class: *const c_char,
    target_class: *const c_char,
    index: usize,
    out: *mut TeplexEdge,
) -> TeplexStatus {
    guard(|| {
        non_null(out, "out")?;
        let layer = layer_of(set, source_class, target_class)?;
        let Some(e) = layer.edges.get(index) else {
            return fail(TeplexStatus::NotFound, format!("edge {index} out of range ({} edges)", layer.len()));
        };
        *out = TeplexEdge {
            source: e.source,
            target: e.target,
            weight: e.weight,
        };
        Ok(())
    })
}

/// Layer strengths, multiplex strength and participation of `actor` in the
/// multiplex with source class `source_class`. `k` receives four values in
/// target order TM, TF, UM, UF. An actor without outgoing edges gets zero
/// strengths and a NaN participation.
///
/// # Safety
/// `set` must be a live handle, string arguments NUL-terminated, `k` writable
/// for four doubles and `o`, `participation` writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_node_measures(
    set: *const TeplexLayerSet,
    source_class: *const c_char,
    actor: *const c_char,
    k: *mut f64,
    o: *mut f64,
    participation: *mut f64,
) -> TeplexStatus {
    guard(|| {
        non_null(k, "k")?;
        non_null(o, "o")?;
        non_null(participation, "participation")?;
        let set = handle(set, "set")?;
        let class = class_arg(source_class, "source_class")?;
        let actor = str_arg(actor, "actor")?;
        let Some(index) = set.set.actor_index(actor) else {
            return fail(TeplexStatus::NotFound, format!("unknown actor {actor:?}"));
        };
        let mux = MultiplexNetwork::new(&set.set, class);
        let strengths = mux.layer_strengths(index);
        slice::from_raw_parts_mut(k, multiplex::LAYERS).copy_from_slice(&strengths);
        *o = multiplex::multiplex_strength(&mux, index);
        *participation = match multiplex::participation_coefficient(&strengths) {
            Ok(p) => p,
            Err(Error::ZeroStrength) => f64::NAN,
            Err(e) => return Err(e.into()),
        };
        Ok(())
    })
}

/// Writes the co-occurrence matrix row-major into `out` (capacity
/// `out_len`), with NaN for undefined rows, and its dimension into `dim`.
/// Row and column order is layer order (TM->TM, TM->TF, …) for
/// `TEPLEX_SCOPE_LAYER16` and TM, TF, UM, UF for `TEPLEX_SCOPE_AGGREGATED4`.
///
/// # Safety
/// `set` must be a live handle, `out` writable for `out_len` doubles and `dim` writable.
#[no_mangle]
pub unsafe extern "C" fn teplex_layer_set_cooccurrence(
    set: *const TeplexLayerSet,
    mode: u32,
    scope: u32,
    out: *mut f64,
    out_len: usize,
    dim: *mut usize,
) -> TeplexStatus {
    guard(|| {
        non_null(dim, "dim")?;
        let set = handle(set, "set")?;
        let mode = match mode {
            TEPLEX_MODE_EDGE_LEVEL => CooccurrenceMode::EdgeLevel,
            TEPLEX_MODE_ACTOR_LEVEL => CooccurrenceMode::ActorLevel,
            other => return fail(TeplexStatus::InvalidArgument, format!("unknown mode {other}")),
        };
        let scope = match scope {
            TEPLEX_SCOPE_LAYER16 => CooccurrenceScope::Layer16,
            TEPLEX_SCOPE_AGGREGATED4 => CooccurrenceScope::Aggregated4,
            other => return fail(TeplexStatus::InvalidArgument, format!("unknown scope {other}")),
        };
        let matrix = multiplex::cooccurrence(&set.set, mode, scope);
        let n = matrix.dim();
        *dim = n;
        if out_len < n * n {
            return fail(TeplexStatus::InvalidArgument, format!("buffer holds {out_len} values, need {}", n * n));
        }
        non_null(out, "out")?;
        let out = slice::from_raw_parts_mut(out, n * n);
        for (i, row) in matrix.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[i * n + j] = v.unwrap_or(f64::NAN);
            }
        }
        Ok(())
    })
}

/// Runs the full pipeline from a key-value configuration file, writing the
/// output tree to the configured `output_dir`.
///
/// # Safety
/// `config_path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn teplex_run_pipeline(config_path: *const c_char) -> TeplexStatus {
    guard(|| {
        let path = str_arg(config_path, "config_path")?;
        let mut cfg = RunConfig::from_file(Path::new(path)).map_err(|e| Failure(TeplexStatus::ConfigError, e.to_string()))?;
        cfg.apply_env()
            .map_err(|e| Failure(TeplexStatus::ConfigError, e.to_string()))?;
        report::run_pipeline(&cfg).map_err(|e| {
            let status = match e.exit_code() {
                1 => TeplexStatus::ConfigError,
                2 => TeplexStatus::DataError,
                _ => TeplexStatus::InternalError,
            };
            Failure(status, e.to_string())
        })?;
        Ok(())
    })
}
