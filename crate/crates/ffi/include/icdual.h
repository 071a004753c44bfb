#ifndef ICDUAL_H
#define ICDUAL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IcdualStatus {
  ICDUAL_STATUS_OK = 0,
  ICDUAL_STATUS_NULL_POINTER = 1,
  ICDUAL_STATUS_PRECONDITION = 2,
  ICDUAL_STATUS_PARSE = 3,
  ICDUAL_STATUS_INTERNAL = 4,
  ICDUAL_STATUS_OVERFLOW = 5,
  ICDUAL_STATUS_INVALID_UTF8 = 6,
} IcdualStatus;

/**
 * Separable function built from its JSON description.
 */
typedef struct IcdualSeparable IcdualSeparable;

/**
 * Finite-domain integer-valued function.
 */
typedef struct IcdualTable IcdualTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or NULL. Valid until the next call
 * into the library from the same thread.
 */
const char *icdual_last_error(void);

/**
 * Empty table in dimension `dim`. Free with `icdual_table_free`.
 */
struct IcdualTable *icdual_table_new(size_t dim);

/**
 * Sets `f(x) = value`; `x` has `dim` entries.
 *
 * # Safety
 * `table` must come from `icdual_table_new`; `x` must point to `dim` values.
 */
enum IcdualStatus icdual_table_set(struct IcdualTable *table, const int64_t *x, int64_t value);

/**
 * # Safety
 * `table` must come from `icdual_table_new` or be NULL.
 */
void icdual_table_free(struct IcdualTable *table);

/**
 * Parses a separable function from JSON (`{"orientation", "pieces"}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IcdualStatus icdual_separable_from_json(const char *json, struct IcdualSeparable **out);

/**
 * # Safety
 * `psi` must come from `icdual_separable_from_json` or be NULL.
 */
void icdual_separable_free(struct IcdualSeparable *psi);

/**
 * Integral convexity test. `mode` 0 checks the domain and pairs at
 * distance two; any other value checks all pairs at distance two or more.
 *
 * # Safety
 * `table` must be a live handle and `out_holds` a valid pointer.
 */
enum IcdualStatus icdual_check_ic(const struct IcdualTable *table,
                                  int32_t mode,
                                  int32_t *out_holds);

/**
 * Minimizer of `f - psi` (of `f` when `psi` is NULL). Writes `dim` values
 * to `out_point`.
 *
 * # Safety
 * Handles must be live; `out_point` must hold `dim` values.
 */
enum IcdualStatus icdual_minimize(const struct IcdualTable *table,
                                  const struct IcdualSeparable *psi,
                                  int64_t *out_point,
                                  int64_t *out_value);

/**
 * Integral subgradient of `f` at `x` inside the box `[lower, upper]`
 * (NULL bounds mean unbounded). Sets `*out_found` to 0 when the
 * subdifferential misses the box.
 *
 * # Safety
 * Arrays must hold `dim` values; handles must be live.
 */
enum IcdualStatus icdual_integral_subgradient(const struct IcdualTable *table,
                                              const int64_t *x,
                                              const int64_t *lower,
                                              const int64_t *upper,
                                              int64_t *out_p,
                                              int32_t *out_found);

/**
 * Duality certificate for `min f - psi`: writes the primal point, the
 * integral dual point and the common optimal value.
 *
 * # Safety
 * Handles must be live; output arrays must hold `dim` values.
 */
enum IcdualStatus icdual_fenchel_certificate(const struct IcdualTable *table,
                                             const struct IcdualSeparable *psi,
                                             int64_t *out_x,
                                             int64_t *out_p,
                                             int64_t *out_value);

/**
 * Runs a CLI command. `args_json` is a JSON list of arguments after the
 * program name (e.g. `["check-ic", "--mode", "all-pairs"]`), and
 * `instance_json` an instance document or NULL. The JSON report is
 * returned in `*out_report` (free with `icdual_string_free`) and the CLI
 * exit code in `*out_code`.
 *
 * # Safety
 * Strings must be NUL-terminated; output pointers must be valid.
 */
enum IcdualStatus icdual_run_json(const char *args_json,
                                  const char *instance_json,
                                  char **out_report,
                                  int32_t *out_code);

/**
 * Frees a string returned by the library.
 *
 * # Safety
 * `s` must come from this library or be NULL.
 */
void icdual_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ICDUAL_H */
