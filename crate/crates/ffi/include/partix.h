/* C interface to the partix graph partitioning library.
 *
 * All functions returning int use these codes; on failure,
 * px_last_error_message() describes the problem. Output buffers are
 * caller-allocated; required sizes are documented per function.
 */

#ifndef PARTIX_H
#define PARTIX_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PX_OK 0
#define PX_ERR_INVALID 1
#define PX_ERR_INFEASIBLE 2
#define PX_ERR_IO 3
#define PX_ERR_PARSE 4

/* Opaque graph handle. */
typedef struct PxGraph PxGraph;

/* Message of the last failed call on this thread; valid until the next
 * failing call. Never NULL. */
const char *px_last_error_message(void);

/* Load a METIS graph file. Returns NULL on failure. */
PxGraph *px_graph_load(const char *path);

/* Build a graph from an edge list: `edges` holds 2*num_edges node ids
 * (u0, v0, u1, v1, ...). Self-loops are dropped and parallel edges
 * merged. `node_weights` may be NULL for unit weights; otherwise it
 * holds num_nodes values. Returns NULL on failure. */
PxGraph *px_graph_from_edges(uint64_t num_nodes, const uint64_t *edges,
                             uint64_t num_edges, const int64_t *node_weights);

void px_graph_free(PxGraph *graph);

uint64_t px_graph_num_nodes(const PxGraph *graph);
uint64_t px_graph_num_edges(const PxGraph *graph);

/* Partition into k blocks with imbalance eps. out_blocks receives
 * num_nodes block ids; out_cut (optional, may be NULL) the edge cut. */
int px_partition(const PxGraph *graph, uint64_t k, double eps, uint64_t seed,
                 uint32_t *out_blocks, int64_t *out_cut);

/* Balanced node separator. out_labels receives num_nodes labels:
 * 0 = block 1, 1 = block 2, 2 = separator. out_weight (optional) the
 * separator weight. */
int px_separator(const PxGraph *graph, double eps, uint64_t seed,
                 uint8_t *out_labels, int64_t *out_weight);

/* Partition the edges into k blocks. out_blocks receives num_edges
 * block ids in canonical (sorted by endpoints, u < v) edge order.
 * out_replication (optional) the vertex replication factor. */
int px_edge_partition(const PxGraph *graph, uint64_t k, double eps,
                      uint64_t seed, uint32_t *out_blocks,
                      double *out_replication);

/* Map num_nodes tasks onto a machine hierarchy a1..ak (innermost
 * first; the product must equal num_nodes). out_pes receives one
 * processing-element id per task. */
int px_map(const PxGraph *graph, const uint64_t *factors,
           uint64_t num_factors, uint64_t seed, uint32_t *out_pes);

/* Deterministic Barabasi-Albert edges with indices lo..hi for the
 * parameter set (n nodes, d edges per node, n0 seed nodes, seed).
 * out_edges receives 2*(hi-lo) node ids. Generating the index range in
 * chunks yields identical edges. */
int px_ba_generate(uint64_t n, uint64_t d, uint64_t n0, uint64_t seed,
                   uint64_t lo, uint64_t hi, uint64_t *out_edges);

#ifdef __cplusplus
}
#endif

#endif /* PARTIX_H */
