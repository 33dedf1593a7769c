#ifndef SUPERGEOM_H
#define SUPERGEOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_ARGUMENT = 2,
  SG_STATUS_EQUAL_BLOCKS = 3,
  SG_STATUS_PARSE = 4,
  SG_STATUS_SHAPE = 5,
  SG_STATUS_CAP = 6,
  SG_STATUS_PANIC = 7,
} SgStatus;

/**
 * A matrix-valued differential form.
 */
typedef struct SgForm SgForm;

/**
 * Structure constants of `sl(n|m)` in the canonical basis.
 */
typedef struct SgGeometry SgGeometry;

/**
 * Builds the structure constants for `sl(n|m)`; `n ≠ m`, `n + m ≥ 2`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum SgStatus sg_geometry_new(size_t n, size_t m, struct SgGeometry **out);

/**
 * # Safety
 * `geometry` must be null or a handle from [`sg_geometry_new`] not yet freed.
 */
void sg_geometry_free(struct SgGeometry *geometry);

/**
 * Writes `n`, `m` and the number of basis derivations.
 *
 * # Safety
 * `geometry` must be a live handle; the out pointers must be writable.
 */
enum SgStatus sg_geometry_dimensions(const struct SgGeometry *geometry,
                                     size_t *n,
                                     size_t *m,
                                     size_t *dim);

/**
 * Basis table and structure constants as JSON (1-based indices).
 *
 * # Safety
 * `geometry` must be a live handle and `out` writable.
 */
enum SgStatus sg_structure_constants_json(const struct SgGeometry *geometry, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void sg_string_free(char *s);

/**
 * The canonical 1-form `Θ`.
 *
 * # Safety
 * `geometry` must be a live handle and `out` writable.
 */
enum SgStatus sg_form_canonical_theta(const struct SgGeometry *geometry, struct SgForm **out);

/**
 * Parses a form from JSON: `{n, m, degree, entries: [{index, matrix}]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum SgStatus sg_form_from_json(const char *json, struct SgForm **out);

/**
 * # Safety
 * `form` must be a live handle and `out` writable.
 */
enum SgStatus sg_form_to_json(const struct SgForm *form, char **out);

/**
 * # Safety
 * All handles must be live and `out` writable.
 */
enum SgStatus sg_form_exterior_derivative(const struct SgGeometry *geometry,
                                          const struct SgForm *form,
                                          struct SgForm **out);

/**
 * # Safety
 * Both forms must be live handles and `out` writable.
 */
enum SgStatus sg_form_wedge(const struct SgForm *left,
                            const struct SgForm *right,
                            struct SgForm **out);

/**
 * # Safety
 * `form` must be a live handle and `out` writable.
 */
enum SgStatus sg_form_degree(const struct SgForm *form, size_t *out);

/**
 * # Safety
 * `form` must be a live handle and `out` writable.
 */
enum SgStatus sg_form_is_zero(const struct SgForm *form, bool *out);

/**
 * # Safety
 * `form` must be null or a live handle.
 */
void sg_form_free(struct SgForm *form);

/**
 * Checks the structure-constant identities; `passed` receives the verdict and
 * `report` (if not null) the JSON report.
 *
 * # Safety
 * `geometry` must be a live handle, `passed` writable, `report` null or writable.
 */
enum SgStatus sg_verify_identities(const struct SgGeometry *geometry, bool *passed, char **report);

/**
 * Writes `b_0 … b_{max_p}` into `out`, which must hold `max_p + 1` entries.
 * Forms of degree above `degree_cap` are never built.
 *
 * # Safety
 * `geometry` must be a live handle and `out` valid for `max_p + 1` writes.
 */
enum SgStatus sg_betti_numbers(const struct SgGeometry *geometry,
                               size_t max_p,
                               size_t degree_cap,
                               size_t *out);

/**
 * Message for the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sg_last_error_message(void);

#endif  /* SUPERGEOM_H */
