/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef DICKSONLAB_H
#define DICKSONLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DlEvalMethod {
  DL_EVAL_METHOD_DIRECT = 0,
  DL_EVAL_METHOD_RECURSIVE = 1,
  DL_EVAL_METHOD_FUNCTIONAL = 2,
  DL_EVAL_METHOD_VIA_F = 3,
} DlEvalMethod;

typedef enum DlPpMethod {
  DL_PP_METHOD_EXHAUSTIVE = 0,
  DL_PP_METHOD_POWER_SUM = 1,
  DL_PP_METHOD_TWO_TO_ONE = 2,
} DlPpMethod;

typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_NULL_POINTER = 1,
  DL_STATUS_INVALID_ARGUMENT = 2,
  DL_STATUS_FIELD_TOO_LARGE = 3,
  DL_STATUS_CHARACTERISTIC_TWO = 4,
  DL_STATUS_INDEX_TOO_LARGE = 5,
  DL_STATUS_BUFFER_TOO_SMALL = 6,
  DL_STATUS_INCONSISTENT = 7,
  DL_STATUS_PANIC = 8,
} DlStatus;

typedef enum DlSumMethod {
  DL_SUM_METHOD_RECURRENCE = 0,
  DL_SUM_METHOD_BRUTE_FORCE = 1,
} DlSumMethod;

/**
 * Opaque field handle.
 */
typedef struct DlField DlField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on this thread.
 */
const char *dl_last_error(void);

/**
 * Builds `F_{p^e}` with the default modulus. `force` lifts the size limit.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum DlStatus dl_field_new(uint64_t p, uint32_t e, bool force, struct DlField **out);

/**
 * # Safety
 * `field` must come from [`dl_field_new`] and not have been freed; null is
 * ignored.
 */
void dl_field_free(struct DlField *field);

/**
 * `q`, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint64_t dl_field_order(const struct DlField *field);

/**
 * `p`, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint64_t dl_field_characteristic(const struct DlField *field);

/**
 * `E_n(a, x)` by the explicit sum.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for a write.
 */
enum DlStatus dl_eval(const struct DlField *field,
                      uint64_t n,
                      uint64_t a,
                      uint64_t x,
                      uint64_t *out);

/**
 * `E_n(1, x)` by the chosen method.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for a write.
 */
enum DlStatus dl_eval_e1(const struct DlField *field,
                         uint64_t n,
                         uint64_t x,
                         enum DlEvalMethod method,
                         uint64_t *out);

/**
 * Whether `x -> E_n(1, x)` permutes the field.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for a write.
 */
enum DlStatus dl_is_pp(const struct DlField *field, uint64_t n, enum DlPpMethod method, bool *out);

/**
 * Whether `n` passes every applicable necessary condition for `E_n(1, x)`
 * to permute the field.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for a write.
 */
enum DlStatus dl_filters_pass(const struct DlField *field, uint64_t n, bool *out);

/**
 * Writes `S_1 ..= S_{q^2-1}` (element indices) into `buf`. `len` must be at
 * least `q^2 - 1`; `written` receives the count either way.
 *
 * # Safety
 * `field` must be a live handle, `buf` valid for `len` writes and `written`
 * for one.
 */
enum DlStatus dl_sum_table(const struct DlField *field,
                           enum DlSumMethod method,
                           uint64_t *buf,
                           size_t len,
                           size_t *written);

/**
 * Canonical rendering `c0.c1...` of an element; free with
 * [`dl_string_free`]. Null on error.
 *
 * # Safety
 * `field` must be a live handle.
 */
char *dl_element_string(const struct DlField *field, uint64_t index);

/**
 * Parses `c0.c1...`.
 *
 * # Safety
 * `field` must be a live handle, `text` a nul-terminated string and `out`
 * valid for a write.
 */
enum DlStatus dl_element_parse(const struct DlField *field, const char *text, uint64_t *out);

/**
 * JSON with `p`, `e`, `q`, `modulus` and `nu`; free with [`dl_string_free`].
 * Null for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
char *dl_field_info_json(const struct DlField *field);

/**
 * # Safety
 * `s` must come from this library and not have been freed; null is ignored.
 */
void dl_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DICKSONLAB_H */
