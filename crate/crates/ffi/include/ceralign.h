#ifndef CERALIGN_H
#define CERALIGN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CeralignStatus {
  CERALIGN_STATUS_OK = 0,
  CERALIGN_STATUS_NULL_POINTER = 1,
  CERALIGN_STATUS_INVALID_ARGUMENT = 2,
  CERALIGN_STATUS_DOMAIN = 3,
  CERALIGN_STATUS_CAP_EXCEEDED = 4,
  CERALIGN_STATUS_PARSE = 5,
  CERALIGN_STATUS_IO = 6,
  CERALIGN_STATUS_CONFIG = 7,
  CERALIGN_STATUS_PANIC = 8,
} CeralignStatus;

/**
 * Opaque graph handle.
 */
typedef struct CeralignGraph CeralignGraph;

/**
 * Opaque handle to a sampled `(Ga, Gb)` pair.
 */
typedef struct CeralignPair CeralignPair;

/**
 * Plain-data result of `ceralign_map_estimate`.
 */
typedef struct CeralignAlignment {
  uint64_t min_delta_hamming;
  uint64_t ties;
  /**
   * The remaining fields are meaningful only when this is true.
   */
  bool has_planted;
  uint64_t q_size;
  bool strict_success;
  uint64_t eta_numerator;
  uint64_t eta_denominator;
} CeralignAlignment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next library call on the same thread.
 */
const char *ceralign_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ceralign_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ceralign_string_free(char *s);

/**
 * Parses the text form `n=<n>;edges=<hex>`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CeralignStatus ceralign_graph_parse(const char *text, struct CeralignGraph **out);

/**
 * Graph from an edge list given as `2·edge_count` vertex indices.
 *
 * # Safety
 * `edges` must point to `2·edge_count` values (or be NULL when `edge_count` is 0).
 */
enum CeralignStatus ceralign_graph_from_edges(size_t n,
                                              const size_t *edges,
                                              size_t edge_count,
                                              struct CeralignGraph **out);

/**
 * # Safety
 * `g` must be NULL or a live handle from this library.
 */
void ceralign_graph_free(struct CeralignGraph *g);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t ceralign_graph_vertex_count(const struct CeralignGraph *g);

/**
 * Number of edges, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t ceralign_graph_edge_count(const struct CeralignGraph *g);

/**
 * Text form of a graph; release with `ceralign_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CeralignStatus ceralign_graph_to_string(const struct CeralignGraph *g, char **out);

/**
 * Samples `(Ga, Gb) ~ ER(n, p)` from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CeralignStatus ceralign_sample_pair(size_t n,
                                         double p11,
                                         double p10,
                                         double p01,
                                         double p00,
                                         uint64_t seed,
                                         struct CeralignPair **out);

/**
 * # Safety
 * `p` must be NULL or a live handle from this library.
 */
void ceralign_pair_free(struct CeralignPair *p);

/**
 * New handle holding a copy of `Ga` (`which = 0`) or `Gb` (`which = 1`).
 *
 * # Safety
 * `pair` must be a live handle; `out` must be writable.
 */
enum CeralignStatus ceralign_pair_graph(const struct CeralignPair *pair,
                                        uint32_t which,
                                        struct CeralignGraph **out);

/**
 * Relabels `g` by the permutation `images[0..n]`.
 *
 * # Safety
 * `g` must be a live handle, `images` must hold as many entries as `g` has
 * vertices, and `out` must be writable.
 */
enum CeralignStatus ceralign_anonymize(const struct CeralignGraph *g,
                                       const size_t *images,
                                       struct CeralignGraph **out);

/**
 * Exhaustive MAP alignment of `gc` against `gb`.
 *
 * `planted` may be NULL; otherwise it holds `n` images used for scoring.
 * `best_perm` may be NULL; otherwise it receives the `n` images of the estimate.
 *
 * # Safety
 * Handles must be live; non-NULL buffers must hold `n` entries; `out` must be writable.
 */
enum CeralignStatus ceralign_map_estimate(const struct CeralignGraph *gc,
                                          const struct CeralignGraph *gb,
                                          const size_t *planted,
                                          size_t *best_perm,
                                          struct CeralignAlignment *out);

/**
 * `|Aut(g)|`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CeralignStatus ceralign_automorphism_count(const struct CeralignGraph *g, uint64_t *out);

/**
 * `|{π : δ(l(π); ga, gb) ≤ 0}|`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum CeralignStatus ceralign_q_set_size(const struct CeralignGraph *ga,
                                        const struct CeralignGraph *gb,
                                        uint64_t *out);

/**
 * `z₂` of the dense bound `P[δ ≤ 0] ≤ z₂^ñ`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CeralignStatus ceralign_dense_z2(size_t n,
                                      double p11,
                                      double p10,
                                      double p01,
                                      double p00,
                                      double *out);

/**
 * Runs the generating-function suite to cycle length `depth` (1..=8).
 *
 * # Safety
 * `passed` must be writable.
 */
enum CeralignStatus ceralign_verify_gf(size_t depth, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CERALIGN_H */
