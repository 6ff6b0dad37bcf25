/* C interface to the opvolterra operator-calculus library. */

#ifndef OPVOLTERRA_H
#define OPVOLTERRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible call.
 */
typedef enum OvStatus {
  OV_STATUS_OK = 0,
  OV_STATUS_NULL_POINTER = 1,
  OV_STATUS_INVALID_ARGUMENT = 2,
  OV_STATUS_INVALID_UTF8 = 3,
  OV_STATUS_INTERNAL = 4,
} OvStatus;

/**
 * Opaque handle to an exact operator sum.
 */
typedef struct OvOperatorSum OvOperatorSum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *ov_version(void);

/**
 * Releases a string allocated by this library.
 *
 * # Safety
 * `s` must have been returned by a function from this library and not
 * already freed. Null is accepted and ignored.
 */
void ov_string_free(char *s);

/**
 * Releases an operator-sum handle. Null is accepted and ignored.
 *
 * # Safety
 * `s` must have been returned by this library and not already freed.
 */
void ov_operator_sum_free(struct OvOperatorSum *s);

/**
 * Closed expansion of the n-th power (n >= 1) into canonical terms.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum OvStatus ov_expand_xi(uint32_t n, struct OvOperatorSum **out);

/**
 * n-th power computed from the recursive definition by the rewrite engine.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum OvStatus ov_power_by_rewrite(uint32_t n, struct OvOperatorSum **out);

/**
 * Exact structural equality of two sums.
 *
 * # Safety
 * `a`, `b` and `out` must be valid pointers.
 */
enum OvStatus ov_operator_sum_eq(const struct OvOperatorSum *a,
                                 const struct OvOperatorSum *b,
                                 bool *out);

/**
 * Number of canonical terms in the sum.
 *
 * # Safety
 * `s` and `out` must be valid pointers.
 */
enum OvStatus ov_operator_sum_len(const struct OvOperatorSum *s, size_t *out);

/**
 * Serializes the sum as JSON: a list of {coeff, x_pow, i_pow} objects
 * sorted by integration count, coefficients as exact "p/q" strings.
 *
 * # Safety
 * `s` and `out` must be valid pointers; free the string with
 * [`ov_string_free`].
 */
enum OvStatus ov_operator_sum_json(const struct OvOperatorSum *s, char **out);

/**
 * Human-readable rendering like "x^3 I^3 - 3 x^2 I^4 + 3 x I^5".
 *
 * # Safety
 * `s` and `out` must be valid pointers; free the string with
 * [`ov_string_free`].
 */
enum OvStatus ov_operator_sum_pretty(const struct OvOperatorSum *s, char **out);

/**
 * Triangle entry a(n, k) as a decimal string (0 outside the triangle).
 *
 * # Safety
 * `out` must be a valid pointer; free the string with [`ov_string_free`].
 */
enum OvStatus ov_bessel_number(uint32_t n, uint32_t k, char **out);

/**
 * y_n(-1) as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer; free the string with [`ov_string_free`].
 */
enum OvStatus ov_a000806(uint32_t n, char **out);

/**
 * n-th power applied to t^exponent, as closed-form JSON
 * {kind, p, q} with exact coefficient strings.
 *
 * # Safety
 * `out` must be a valid pointer; free the string with [`ov_string_free`].
 */
enum OvStatus ov_apply_monomial_json(uint32_t n, uint32_t exponent, char **out);

/**
 * n-th power applied to e^t, as closed-form JSON.
 *
 * # Safety
 * `out` must be a valid pointer; free the string with [`ov_string_free`].
 */
enum OvStatus ov_apply_exp_json(uint32_t n, char **out);

/**
 * n-th power applied to ln(1+t), as closed-form JSON.
 *
 * # Safety
 * `out` must be a valid pointer; free the string with [`ov_string_free`].
 */
enum OvStatus ov_apply_log1p_json(uint32_t n, char **out);

/**
 * Coefficient and exponent of the n-th power applied to t^(alpha-1);
 * requires alpha > 0.
 *
 * # Safety
 * `coefficient` and `exponent` must be valid pointers.
 */
enum OvStatus ov_power_closed_form(uint32_t n, double alpha, double *coefficient, double *exponent);

/**
 * Runs a named verification suite ("all", "theorem1", ...) at default
 * bounds, or with the primary bound overridden when n_max > 0. Writes
 * the number of failed cases; `Ok` means the suite ran, not that it
 * passed.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `failed` a valid
 * pointer.
 */
enum OvStatus ov_verify_suite(const char *name, uint32_t n_max, uint32_t *failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPVOLTERRA_H */
