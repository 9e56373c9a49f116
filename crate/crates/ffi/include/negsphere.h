#ifndef NEGSPHERE_H
#define NEGSPHERE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum NsStatus {
  NS_STATUS_OK = 0,
  // A required pointer argument was null.
  NS_STATUS_NULL_POINTER = 1,
  // Arguments rejected by validation (degree, limits, JSON, UTF-8...).
  NS_STATUS_INVALID_INPUT = 2,
  // Integer overflow in exact arithmetic.
  NS_STATUS_OVERFLOW = 3,
  // Vertex or edge index does not exist.
  NS_STATUS_NOT_FOUND = 4,
  // The graph is empty, disconnected, cyclic or has positive genus.
  NS_STATUS_NOT_A_TREE = 5,
  // No fibration fits the requested budget.
  NS_STATUS_NO_SOLUTION = 6,
  // Internal consistency check failed.
  NS_STATUS_INTERNAL = 7,
  // A panic was caught at the boundary.
  NS_STATUS_PANIC = 8,
} NsStatus;

// Opaque plumbing graph.
typedef struct NsGraph NsGraph;

// Opaque search result.
typedef struct NsSearchResult NsSearchResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// successful call. Valid until the next call on the same thread.
const char *ns_last_error_message(void);

// Library version as a static string.
const char *ns_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ns_string_free(char *s);

// Square of the canonical sphere in E(n).
//
// # Safety
// `out` must be valid for writes.
enum NsStatus ns_s_construction(uint32_t n, int64_t *out);

// The published closed form as an exact fraction `num / den`.
//
// # Safety
// `out_num` and `out_den` must be valid for writes.
enum NsStatus ns_s_closed_form(uint32_t n, int64_t *out_num, int64_t *out_den);

// `s(n) − 5k`, the square reachable in E(n)#k by edge blow-ups alone.
//
// # Safety
// `out` must be valid for writes.
enum NsStatus ns_guaranteed_square(uint32_t n, uint32_t k, int64_t *out);

// Empty graph. Never null.
struct NsGraph *ns_graph_new(void);

// Releases a graph. Null is ignored.
//
// # Safety
// `g` must come from this library and not have been freed.
void ns_graph_free(struct NsGraph *g);

// Parses a graph from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum NsStatus ns_graph_from_json(const char *json, struct NsGraph **out);

// Tree of the canonical sphere in E(n).
//
// # Safety
// `out` must be valid for writes.
enum NsStatus ns_build_canonical_tree(uint32_t n, struct NsGraph **out);

// Adds a genus-0 vertex. `label` may be null.
//
// # Safety
// `g` must be a live graph, `label` null or NUL-terminated, `out_index`
// null or valid for writes.
enum NsStatus ns_graph_add_vertex(struct NsGraph *g,
                                  const char *label,
                                  int64_t weight,
                                  size_t *out_index);

// # Safety
// `g` must be a live graph.
enum NsStatus ns_graph_add_edge(struct NsGraph *g, size_t u, size_t v);

// Blows up the intersection point of `u` and `v`. The new exceptional
// vertex index goes to `out_vertex` if it is not null.
//
// # Safety
// `g` must be a live graph; `out_vertex` null or valid for writes.
enum NsStatus ns_graph_blow_up_edge(struct NsGraph *g, size_t u, size_t v, size_t *out_vertex);

// Blows up a generic point of vertex `v`.
//
// # Safety
// `g` must be a live graph; `out_vertex` null or valid for writes.
enum NsStatus ns_graph_blow_up_point(struct NsGraph *g, size_t v, size_t *out_vertex);

// Square of the sphere obtained by smoothing the tree.
//
// # Safety
// `g` must be a live graph; `out` valid for writes.
enum NsStatus ns_graph_smooth(const struct NsGraph *g, int64_t *out);

// Same square computed as `vᵀQv` from the intersection matrix.
//
// # Safety
// `g` must be a live graph; `out` valid for writes.
enum NsStatus ns_graph_oracle_square(const struct NsGraph *g, int64_t *out);

// Vertex count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live graph.
size_t ns_graph_vertex_count(const struct NsGraph *g);

// Edge count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live graph.
size_t ns_graph_edge_count(const struct NsGraph *g);

// JSON form of the graph. Free with [`ns_string_free`].
//
// # Safety
// `g` must be a live graph; `out` valid for writes.
enum NsStatus ns_graph_to_json(const struct NsGraph *g, char **out);

// Graphviz DOT text. `name` may be null. Free with [`ns_string_free`].
//
// # Safety
// `g` must be a live graph; `name` null or NUL-terminated; `out` valid
// for writes.
enum NsStatus ns_graph_to_dot(const struct NsGraph *g, const char *name, char **out);

// Most negative sphere in E(n)#k over the default fiber set.
// `threads == 0` uses the shared pool.
//
// # Safety
// `out` must be valid for writes.
enum NsStatus ns_search(uint32_t n, uint32_t k, uint32_t threads, struct NsSearchResult **out);

// # Safety
// `r` must come from [`ns_search`] and not have been freed.
void ns_search_result_free(struct NsSearchResult *r);

// # Safety
// `r` must be a live result; `out` valid for writes.
enum NsStatus ns_search_result_best_square(const struct NsSearchResult *r, int64_t *out);

// `best_square / b2` in lowest terms.
//
// # Safety
// `r` must be a live result; both out-pointers valid for writes.
enum NsStatus ns_search_result_ratio(const struct NsSearchResult *r,
                                     int64_t *out_num,
                                     int64_t *out_den);

// Rebuilds the winning tree as a new graph handle.
//
// # Safety
// `r` must be a live result; `out` valid for writes.
enum NsStatus ns_search_result_graph(const struct NsSearchResult *r, struct NsGraph **out);

// JSON form of the result. Free with [`ns_string_free`].
//
// # Safety
// `r` must be a live result; `out` valid for writes.
enum NsStatus ns_search_result_to_json(const struct NsSearchResult *r, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEGSPHERE_H */
