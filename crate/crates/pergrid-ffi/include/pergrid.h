#ifndef PERGRID_H
#define PERGRID_H

/* Generated by cbindgen from pergrid-ffi; edit src/lib.rs instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point. Where a counterpart
 * exists, the nonzero values match the exit codes of the bundled
 * command-line tool.
 */
typedef enum PgStatus {
  /**
   * The call succeeded.
   */
  PG_STATUS_OK = 0,
  /**
   * The module, staircase, or argument was rejected as invalid.
   */
  PG_STATUS_INVALID_INPUT = 2,
  /**
   * The operation is not defined for this grid shape or field.
   */
  PG_STATUS_UNSUPPORTED = 3,
  /**
   * An internal cross-check failed; the result cannot be trusted.
   */
  PG_STATUS_INCONSISTENT = 4,
  /**
   * A required pointer argument was null.
   */
  PG_STATUS_NULL_ARGUMENT = 5,
  /**
   * A string argument was not valid UTF-8.
   */
  PG_STATUS_INVALID_UTF8 = 6,
  /**
   * A panic was caught at the language boundary.
   */
  PG_STATUS_INTERNAL = 7,
} PgStatus;

/**
 * Opaque handle to a validated module (a representation of a grid quiver).
 */
typedef struct PgModule PgModule;

/**
 * Classification flags filled in by `pg_module_classify`.
 */
typedef struct PgClassification {
  /**
   * Every vertex carries dimension zero or one.
   */
  bool thin;
  /**
   * The support is connected in the underlying graph.
   */
  bool support_connected;
  /**
   * The support is closed under the grid order within its bounding box.
   */
  bool support_convex;
  /**
   * Every structure map between support vertices is nonzero.
   */
  bool nonzero_over_support;
  /**
   * Every structure map between support vertices is the identity.
   */
  bool identity_over_support;
  /**
   * Thin, connected, convex support with nonzero maps over it.
   */
  bool pre_interval;
  /**
   * Pre-interval with identity maps: an interval representation.
   */
  bool interval;
} PgClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on the calling thread, as a
 * NUL-terminated string. Empty until a call fails.
 *
 * The pointer stays valid until the next failing call on the same thread;
 * do not free it.
 */
const char *pg_last_error(void);

/**
 * Library version as a static NUL-terminated string; do not free it.
 */
const char *pg_version(void);

/**
 * Releases a string produced by this library. Null is ignored.
 *
 * # Safety
 * `text` must be a pointer previously returned through an out-parameter of
 * this library, and must not be used afterwards.
 */
void pg_string_free(char *text);

/**
 * Parses and validates a module from a JSON document.
 *
 * On success stores a fresh handle in `out`; release it with
 * `pg_module_free`.
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to writable
 * storage for one pointer.
 */
enum PgStatus pg_module_parse(const char *json, struct PgModule **out);

/**
 * Reads and validates a module from a JSON file.
 *
 * # Safety
 * `path` must point to a NUL-terminated string and `out` to writable
 * storage for one pointer.
 */
enum PgStatus pg_module_read(const char *path, struct PgModule **out);

/**
 * Releases a module handle. Null is ignored.
 *
 * # Safety
 * `module` must be a handle produced by this library, and must not be used
 * afterwards.
 */
void pg_module_free(struct PgModule *module);

/**
 * Serializes a module back to its JSON document form.
 *
 * # Safety
 * `module` must be a live handle and `out` writable storage for one
 * pointer. Release the string with `pg_string_free`.
 */
enum PgStatus pg_module_to_json(const struct PgModule *module, char **out);

/**
 * Re-checks the commutativity relations of a module.
 *
 * Handles from the parse functions are always valid; this is useful after
 * constructing documents by hand.
 *
 * # Safety
 * `module` must be a live handle.
 */
enum PgStatus pg_module_validate(const struct PgModule *module);

/**
 * Stores the total dimension (sum over all vertices) in `out`.
 *
 * # Safety
 * `module` must be a live handle and `out` writable storage for one value.
 */
enum PgStatus pg_module_dim_total(const struct PgModule *module, size_t *out);

/**
 * Fills `out` with the classification flags of the module.
 *
 * # Safety
 * `module` must be a live handle and `out` writable storage for one
 * `PgClassification`.
 */
enum PgStatus pg_module_classify(const struct PgModule *module, struct PgClassification *out);

/**
 * Rewrites an interval module into identity form by a diagonal base
 * change, storing the fixed module as a new handle in `out`.
 *
 * Fails with `PG_STATUS_INVALID_INPUT` when the module is not an interval
 * module, including when the scalars cannot be made consistent around a
 * cycle of unit squares.
 *
 * # Safety
 * `module` must be a live handle and `out` writable storage for one
 * pointer.
 */
enum PgStatus pg_module_rebase(const struct PgModule *module, struct PgModule **out);

/**
 * Splits a thin module on an equioriented two-factor grid into staircase
 * components, storing one staircase per line in `out` (empty string for
 * the zero module).
 *
 * # Safety
 * `module` must be a live handle and `out` writable storage for one
 * pointer. Release the string with `pg_string_free`.
 */
enum PgStatus pg_module_thin_decompose(const struct PgModule *module, char **out);

/**
 * Decides whether the module is a direct sum of interval representations,
 * storing the verdict in `out`.
 *
 * Uses the staircase catalog on equioriented two-factor grids and falls
 * back to enumerating all interval representations on other grids with at
 * most 16 vertices; anything larger is `PG_STATUS_UNSUPPORTED`.
 *
 * # Safety
 * `module` must be a live handle and `out` writable storage for one value.
 */
enum PgStatus pg_module_interval_decomposable(const struct PgModule *module, bool *out);

/**
 * Stores in `out` how often the interval with the given staircase (in the
 * text form `"s..t: [b,d];..."`) occurs as a direct summand of the module.
 *
 * # Safety
 * `module` must be a live handle, `staircase` a NUL-terminated string, and
 * `out` writable storage for one value.
 */
enum PgStatus pg_module_interval_multiplicity(const struct PgModule *module,
                                              const char *staircase,
                                              size_t *out);

/**
 * Stores the number of intervals of the `rows` x `cols` equioriented grid
 * in `out`. Both sides must be at least 1 and `rows + cols` at most 32 so
 * the count fits in 64 bits.
 *
 * # Safety
 * `out` must be writable storage for one value.
 */
enum PgStatus pg_count_intervals(uint64_t rows, uint64_t cols, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERGRID_H */
