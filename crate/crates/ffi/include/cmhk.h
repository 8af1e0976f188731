#ifndef CMHK_H
#define CMHK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum CmhkStatus {
  CMHK_STATUS_OK = 0,
  /**
   * A mathematical check did not hold.
   */
  CMHK_STATUS_CHECK_FAILED = 1,
  /**
   * Malformed or out-of-domain input.
   */
  CMHK_STATUS_INVALID_INPUT = 2,
  CMHK_STATUS_NULL_POINTER = 3,
  /**
   * Internal panic; the library state is unaffected.
   */
  CMHK_STATUS_INTERNAL = 4,
} CmhkStatus;

/**
 * Opaque rational quadratic form.
 */
typedef struct CmhkForm CmhkForm;

/**
 * Opaque p-adic tower.
 */
typedef struct CmhkTower CmhkTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next call.
 */
const char *cmhk_last_error(void);

/**
 * Version string of the library (static).
 */
const char *cmhk_version(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cmhk_string_free(char *s);

/**
 * Hilbert symbol `(a, b)_p` of two rationals given as "a/b" strings;
 * `p = 0` is the real place.
 *
 * # Safety
 * `a`, `b` must be NUL-terminated strings and `out` writable.
 */
enum CmhkStatus cmhk_hilbert(const char *a, const char *b, uint64_t p, int32_t *out);

/**
 * Form from a JSON document `{"diagonal": [..]}` or `{"gram": [[..]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum CmhkStatus cmhk_form_from_json(const char *json, struct CmhkForm **out);

/**
 * # Safety
 * `form` must come from `cmhk_form_from_json` and not be used afterwards.
 */
void cmhk_form_free(struct CmhkForm *form);

/**
 * # Safety
 * `form` must be a live handle.
 */
size_t cmhk_form_dim(const struct CmhkForm *form);

/**
 * Local invariant `epsilon_p` (`p = 0`: real place).
 *
 * # Safety
 * `form` must be a live handle and `out` writable.
 */
enum CmhkStatus cmhk_form_epsilon(const struct CmhkForm *form, uint64_t p, int32_t *out);

/**
 * Squarefree discriminant class as a decimal string, and the negative index.
 *
 * # Safety
 * `form` must be a live handle; `disc` and `s_minus` writable.
 */
enum CmhkStatus cmhk_form_invariants(const struct CmhkForm *form, char **disc, size_t *s_minus);

/**
 * Tower `Q_p(zeta_{p^f - 1})[y]/(E)`; `E = y^e - p` when `seed = 0`,
 * otherwise a random Eisenstein polynomial drawn from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CmhkStatus cmhk_tower_new(uint64_t p,
                               size_t f,
                               size_t e,
                               uint32_t precision,
                               uint64_t seed,
                               struct CmhkTower **out);

/**
 * # Safety
 * `t` must come from `cmhk_tower_new` and not be used afterwards.
 */
void cmhk_tower_free(struct CmhkTower *t);

/**
 * Degree of the tower over `Q_p`.
 *
 * # Safety
 * `t` must be a live handle.
 */
size_t cmhk_tower_degree(const struct CmhkTower *t);

/**
 * Builds the Lubin-Tate module of the tower and runs the structure and
 * polygon checks. `CMHK_STATUS_CHECK_FAILED` when any check fails.
 *
 * # Safety
 * `t` must be a live handle.
 */
enum CmhkStatus cmhk_lt_verify(const struct CmhkTower *t, uint64_t seed);

/**
 * Runs the pipeline on a JSON request and writes the JSON report. The report
 * is written whenever the request was valid, also when the verdict fails.
 *
 * # Safety
 * `request` must be a NUL-terminated string and `report` writable.
 */
enum CmhkStatus cmhk_pipeline_json(const char *request, uint64_t seed, char **report);

/**
 * Runs the command-line tool on `argv` (without the program name) and
 * returns its exit code; stdout goes to `out` when non-NULL.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings.
 */
int32_t cmhk_run(size_t argc, const char *const *argv, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CMHK_H */
