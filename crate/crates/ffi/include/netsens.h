#ifndef NETSENS_H
#define NETSENS_H

#include <stddef.h>
#include <stdint.h>

typedef enum NsStatus {
  NS_STATUS_OK = 0,
  NS_STATUS_NULL_POINTER = 1,
  NS_STATUS_INVALID_ARGUMENT = 2,
  NS_STATUS_INFEASIBLE = 3,
  NS_STATUS_IO = 4,
  /**
   * The requested quantity is undefined, e.g. every pair is tied.
   */
  NS_STATUS_UNDEFINED = 5,
  NS_STATUS_BUFFER_TOO_SMALL = 6,
  NS_STATUS_PANIC = 7,
} NsStatus;

typedef enum NsEstimator {
  NS_ESTIMATOR_ITERATIVE = 0,
  NS_ESTIMATOR_IMPUTATION = 1,
} NsEstimator;

/**
 * Opaque graph handle.
 */
typedef struct NsGraph NsGraph;

/**
 * Pair counts behind a sensitivity value.
 */
typedef struct NsPairCounts {
  uint64_t concordant;
  uint64_t discordant;
  uint64_t ties;
  uint64_t compared_nodes;
} NsPairCounts;

/**
 * A Monte-Carlo estimate.
 */
typedef struct NsEstimate {
  double value;
  double std_error;
  uint64_t defined_draws;
  uint64_t undefined_draws;
} NsEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ns_last_error_message(void);

/**
 * Builds a graph on `n` nodes from `m` edges stored as `2 * m` consecutive
 * endpoints. Duplicates and self-loops are dropped.
 *
 * # Safety
 * `edges` must point to `2 * m` readable values (it may be NULL when `m` is
 * 0); `out` must be writable.
 */
enum NsStatus ns_graph_from_edges(size_t n, const size_t *edges, size_t m, struct NsGraph **out);

/**
 * Reads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum NsStatus ns_graph_read(const char *path, struct NsGraph **out);

/**
 * Writes `g` as an edge list.
 *
 * # Safety
 * `g` must be a live handle and `path` a NUL-terminated string.
 */
enum NsStatus ns_graph_write(const struct NsGraph *g, const char *path);

/**
 * Erdős–Rényi `G(n, p)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum NsStatus ns_graph_erdos_renyi(size_t n, double p, uint64_t seed, struct NsGraph **out);

/**
 * Barabási–Albert graph with `m` edges per new node.
 *
 * # Safety
 * `out` must be writable.
 */
enum NsStatus ns_graph_barabasi_albert(size_t n, size_t m, uint64_t seed, struct NsGraph **out);

/**
 * Releases a graph. NULL is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void ns_graph_free(struct NsGraph *g);

/**
 * Node count, 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t ns_graph_node_count(const struct NsGraph *g);

/**
 * Edge count, 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t ns_graph_edge_count(const struct NsGraph *g);

/**
 * Largest connected component as a new graph.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum NsStatus ns_graph_largest_component(const struct NsGraph *g, struct NsGraph **out);

/**
 * Applies one draw of an error mechanism given as a token such as
 * `rm_edges_unif:0.1`.
 *
 * # Safety
 * `g` must be a live handle, `mechanism` a NUL-terminated string and `out`
 * writable.
 */
enum NsStatus ns_graph_perturb(const struct NsGraph *g,
                               const char *mechanism,
                               uint64_t seed,
                               struct NsGraph **out);

/**
 * Writes one score per node into `scores`, which must hold at least
 * `ns_graph_node_count(g)` values. `measure` is one of bc, cc, dc, ec, pr.
 *
 * # Safety
 * `g` must be a live handle, `measure` a NUL-terminated string and `scores`
 * writable for `len` values.
 */
enum NsStatus ns_centrality(const struct NsGraph *g,
                            const char *measure_token,
                            double *scores,
                            size_t len);

/**
 * Sensitivity of the `measure` ranking between `a` and `b`, compared on
 * common node names. `counts` may be NULL. When every pair is tied the call
 * returns `Undefined` but still fills `counts`.
 *
 * # Safety
 * `a`, `b` must be live handles, `measure` a NUL-terminated string, `rho`
 * writable and `counts` NULL or writable.
 */
enum NsStatus ns_sensitivity(const struct NsGraph *a,
                             const struct NsGraph *b,
                             const char *measure_token,
                             double *rho,
                             struct NsPairCounts *counts);

/**
 * Estimates the sensitivity of `observed` under `mechanism` with
 * `inner_samples` Monte-Carlo draws.
 *
 * # Safety
 * `observed` must be a live handle, the strings NUL-terminated and `out`
 * writable.
 */
enum NsStatus ns_estimate(const struct NsGraph *observed,
                          const char *mechanism,
                          const char *measure_token,
                          enum NsEstimator estimator,
                          size_t inner_samples,
                          uint64_t seed,
                          struct NsEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NETSENS_H */
