#ifndef MODBC_H
#define MODBC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum ModbcStatus {
  MODBC_STATUS_OK = 0,
  MODBC_STATUS_NULL_POINTER = 1,
  MODBC_STATUS_INVALID_GRAPH = 2,
  MODBC_STATUS_INVALID_ARGUMENT = 3,
  MODBC_STATUS_BUFFER_TOO_SMALL = 4,
  MODBC_STATUS_PRECONDITION_VIOLATED = 5,
  MODBC_STATUS_GRAPH_TOO_LARGE = 6,
  MODBC_STATUS_PANIC = 7,
} ModbcStatus;

/**
 * Opaque graph handle.
 */
typedef struct ModbcGraph ModbcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t modbc_last_error(char *buf, size_t len);

/**
 * Parses the line-oriented graph format from `len` bytes at `text`.
 *
 * # Safety
 * `text` must be valid for `len` bytes and `out` must be a valid pointer.
 */
enum ModbcStatus modbc_graph_parse(const uint8_t *text, size_t len, struct ModbcGraph **out);

/**
 * Builds a graph from `edge_count` edges given as parallel arrays, with
 * `modules[i]` the module of node `i`.
 *
 * # Safety
 * `us`, `vs` and `weights` must hold `edge_count` values; `modules` must hold
 * `node_count` values; `out` must be a valid pointer.
 */
enum ModbcStatus modbc_graph_from_edges(size_t node_count,
                                        const size_t *modules,
                                        size_t edge_count,
                                        const size_t *us,
                                        const size_t *vs,
                                        const double *weights,
                                        struct ModbcGraph **out);

/**
 * Seeded synthetic modular graph. `module_count == 0` selects `floor(sqrt(n))` modules.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ModbcStatus modbc_graph_generate(size_t node_count,
                                      size_t module_count,
                                      uint64_t seed,
                                      bool enforce_p,
                                      struct ModbcGraph **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must be null or a handle from this library that has not been freed.
 */
void modbc_graph_free(struct ModbcGraph *g);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t modbc_graph_node_count(const struct ModbcGraph *g);

/**
 * Module count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t modbc_graph_module_count(const struct ModbcGraph *g);

/**
 * Exact betweenness over ordered pairs.
 *
 * # Safety
 * `g` must be a live handle; `scores` must be valid for `len` doubles.
 */
enum ModbcStatus modbc_exact_bc(const struct ModbcGraph *g, double *scores, size_t len);

/**
 * Betweenness by explicit path enumeration. Small graphs only.
 *
 * # Safety
 * `g` must be a live handle; `scores` must be valid for `len` doubles.
 */
enum ModbcStatus modbc_oracle_bc(const struct ModbcGraph *g, double *scores, size_t len);

/**
 * Checks that no intra-module shortest path leaves its module, using every node
 * as a source.
 *
 * # Safety
 * `g` must be a live handle.
 */
enum ModbcStatus modbc_validate(const struct ModbcGraph *g);

/**
 * Local, external and global centrality. Any of `lc`, `ec`, `gc` and
 * `central_node` may be null.
 *
 * # Safety
 * `g` must be a live handle; non-null buffers must be valid for `len` doubles.
 */
enum ModbcStatus modbc_modular(const struct ModbcGraph *g,
                               double *lc,
                               double *ec,
                               double *gc,
                               size_t len,
                               size_t *central_node);

/**
 * Coarse module-graph centrality. Any of `ic`, `ec`, `gc` and `central_node`
 * may be null.
 *
 * # Safety
 * `g` must be a live handle; non-null buffers must be valid for `len` doubles.
 */
enum ModbcStatus modbc_coarse(const struct ModbcGraph *g,
                              bool weighted,
                              double *ic,
                              double *ec,
                              double *gc,
                              size_t len,
                              size_t *central_node);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODBC_H */
