/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef TEPLEX_H
#define TEPLEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Co-occurrence counted over (source, target) edges.
#define TEPLEX_MODE_EDGE_LEVEL 0

// Co-occurrence counted over active source actors.
#define TEPLEX_MODE_ACTOR_LEVEL 1

// One row per layer (16 × 16).
#define TEPLEX_SCOPE_LAYER16 0

// One row per source class (4 × 4).
#define TEPLEX_SCOPE_AGGREGATED4 1

// Result of every fallible call.
typedef enum TeplexStatus {
  TEPLEX_STATUS_OK = 0,
  TEPLEX_STATUS_NULL_POINTER = 1,
  TEPLEX_STATUS_INVALID_ARGUMENT = 2,
  TEPLEX_STATUS_LENGTH_MISMATCH = 3,
  TEPLEX_STATUS_ZERO_STRENGTH = 4,
  TEPLEX_STATUS_NOT_FOUND = 5,
  TEPLEX_STATUS_CONFIG_ERROR = 6,
  TEPLEX_STATUS_DATA_ERROR = 7,
  TEPLEX_STATUS_INTERNAL_ERROR = 8,
} TeplexStatus;

// The sixteen typed layers built from a series set.
typedef struct TeplexLayerSet TeplexLayerSet;

// Binary series keyed by (actor, class), filled with [`teplex_series_set_add`].
typedef struct TeplexSeriesSet TeplexSeriesSet;

// A directed edge; `source` and `target` index the layer set's actor table.
typedef struct TeplexEdge {
  uint32_t source;
  uint32_t target;
  double weight;
} TeplexEdge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *teplex_version(void);

// Message from the most recent call on this thread; empty if that call
// succeeded. The pointer stays valid until the next call into the library.
const char *teplex_last_error_message(void);

// Transfer entropy in bits from `x` to `y`, both `len` bytes long.
//
// # Safety
// `x` and `y` must point to `len` readable bytes; `out` must be writable.
enum TeplexStatus teplex_transfer_entropy(const uint8_t *x,
                                          const uint8_t *y,
                                          size_t len,
                                          double *out);

// Closed-form transfer entropy `1 - H_b((1 + c) / 2)` of a copy coupling of strength `c`.
//
// # Safety
// `out` must be writable.
enum TeplexStatus teplex_analytic_te(double c, double *out);

// Participation coefficient of `m` layer strengths.
//
// # Safety
// `k` must point to `m` readable doubles; `out` must be writable.
enum TeplexStatus teplex_participation_coefficient(const double *k, size_t m, double *out);

// New empty series set. Never returns null.
struct TeplexSeriesSet *teplex_series_set_new(void);

// # Safety
// `set` must be null or a handle from [`teplex_series_set_new`], freed at most once.
void teplex_series_set_free(struct TeplexSeriesSet *set);

// Adds or replaces the series of `actor` in `class`. All series in a set
// must have the same length.
//
// # Safety
// `set` must be a live handle, `actor` and `class` NUL-terminated strings,
// and `bits` must point to `len` readable bytes.
enum TeplexStatus teplex_series_set_add(struct TeplexSeriesSet *set,
                                        const char *actor,
                                        const char *class_,
                                        const uint8_t *bits,
                                        size_t len);

// Builds all sixteen layers, keeping edges with TE above `te_min` bits.
//
// # Safety
// `series` must be a live handle and `out` writable. On success `*out`
// receives a handle to release with [`teplex_layer_set_free`].
enum TeplexStatus teplex_layer_set_build(const struct TeplexSeriesSet *series,
                                         double te_min,
                                         struct TeplexLayerSet **out);

// # Safety
// `set` must be null or a handle from [`teplex_layer_set_build`], freed at most once.
void teplex_layer_set_free(struct TeplexLayerSet *set);

// Number of actors in the layer set's actor table.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum TeplexStatus teplex_layer_set_actor_count(const struct TeplexLayerSet *set, size_t *out);

// Actor id at `index`, or null when out of range. The string is owned by
// the layer set.
//
// # Safety
// `set` must be a live handle.
const char *teplex_layer_set_actor_name(const struct TeplexLayerSet *set, size_t index);

// Number of edges in the layer `source_class -> target_class`.
//
// # Safety
// `set` must be a live handle, class arguments NUL-terminated strings and `out` writable.
enum TeplexStatus teplex_layer_set_edge_count(const struct TeplexLayerSet *set,
                                              const char *source_class,
                                              const char *target_class,
                                              size_t *out);

// Edge `index` of a layer, in (source, target) order.
//
// # Safety
// `set` must be a live handle, class arguments NUL-terminated strings and `out` writable.
enum TeplexStatus teplex_layer_set_edge(const struct TeplexLayerSet *set,
                                        const char *source_class,
                                        const char *target_class,
                                        size_t index,
                                        struct TeplexEdge *out);

// Layer strengths, multiplex strength and participation of `actor` in the
// multiplex with source class `source_class`. `k` receives four values in
// target order TM, TF, UM, UF. An actor without outgoing edges gets zero
// strengths and a NaN participation.
//
// # Safety
// `set` must be a live handle, string arguments NUL-terminated, `k` writable
// for four doubles and `o`, `participation` writable.
enum TeplexStatus teplex_layer_set_node_measures(const struct TeplexLayerSet *set,
                                                 const char *source_class,
                                                 const char *actor,
                                                 double *k,
                                                 double *o,
                                                 double *participation);

// Writes the co-occurrence matrix row-major into `out` (capacity
// `out_len`), with NaN for undefined rows, and its dimension into `dim`.
// Row and column order is layer order (TM->TM, TM->TF, …) for
// `TEPLEX_SCOPE_LAYER16` and TM, TF, UM, UF for `TEPLEX_SCOPE_AGGREGATED4`.
//
// # Safety
// `set` must be a live handle, `out` writable for `out_len` doubles and `dim` writable.
enum TeplexStatus teplex_layer_set_cooccurrence(const struct TeplexLayerSet *set,
                                                uint32_t mode,
                                                uint32_t scope,
                                                double *out,
                                                size_t out_len,
                                                size_t *dim);

// Runs the full pipeline from a key-value configuration file, writing the
// output tree to the configured `output_dir`.
//
// # Safety
// `config_path` must be a NUL-terminated string.
enum TeplexStatus teplex_run_pipeline(const char *config_path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEPLEX_H */
