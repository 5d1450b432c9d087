#ifndef SNOWFLAKE_H
#define SNOWFLAKE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_PARAMETER = 2,
  SF_STATUS_DIMENSION_MISMATCH = 3,
  SF_STATUS_OVERFLOW = 4,
  SF_STATUS_BUDGET_EXCEEDED = 5,
  SF_STATUS_NON_CONVERGENCE = 6,
  SF_STATUS_DEGENERATE = 7,
  SF_STATUS_IO = 8,
  SF_STATUS_PARSE = 9,
  SF_STATUS_PANIC = 10,
} SfStatus;

/**
 * Opaque `(p, ε)` parameter set with derived `n` and `α`.
 */
typedef struct SfParams SfParams;

/**
 * Opaque word ball of the discrete Heisenberg group.
 */
typedef struct SfWordBall SfWordBall;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *sf_status_message(enum SfStatus status);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SfStatus sf_params_new(double p, double epsilon, struct SfParams **out);

/**
 * # Safety
 * `params` must come from `sf_params_new` and not be freed twice. Null is ignored.
 */
void sf_params_free(struct SfParams *params);

/**
 * # Safety
 * `params` must be a live handle; `n` and `alpha` must be writable.
 */
enum SfStatus sf_params_derived(const struct SfParams *params, size_t *n, double *alpha);

/**
 * # Safety
 * `x` must point to `len` readable doubles; `out` must be writable.
 */
enum SfStatus sf_koranyi_norm(const double *x, size_t len, double *out);

/**
 * # Safety
 * `x` and `y` must each point to `len` readable doubles; `out` must be writable.
 */
enum SfStatus sf_koranyi_distance(const double *x, const double *y, size_t len, double *out);

/**
 * `I(s, w)` with its error bound.
 *
 * # Safety
 * `value` and `abs_error` must be writable.
 */
enum SfStatus sf_lambda_integral(double s,
                                 double w,
                                 double p,
                                 double epsilon,
                                 double tol,
                                 double *value,
                                 double *abs_error);

/**
 * Lebesgue volume of the Korányi unit ball in `H_n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_ball_volume(size_t n, double *out);

/**
 * Distance between the images of `x` and `y` under the representation embedding.
 *
 * # Safety
 * `params` must be a live handle; `x`, `y` must each point to `len` doubles;
 * `value` and `abs_error` must be writable.
 */
enum SfStatus sf_repr_distance(const struct SfParams *params,
                               const double *x,
                               const double *y,
                               size_t len,
                               double tol,
                               double *value,
                               double *abs_error);

/**
 * Monte Carlo estimate of `‖T(x)‖_p^p`; `x` lives in `H_n` with `n` taken
 * from `params`.
 *
 * # Safety
 * `params` must be a live handle; `x` must point to `len` doubles; `mean`
 * and `std_error` must be writable.
 */
enum SfStatus sf_kernel_norm(const struct SfParams *params,
                             const double *x,
                             size_t len,
                             uint64_t samples,
                             uint64_t seed,
                             double *mean,
                             double *std_error);

/**
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_word_ball_new(uint32_t radius, size_t budget, struct SfWordBall **out);

/**
 * `|B(r)|` for `r` up to the radius the ball was built with.
 *
 * # Safety
 * `ball` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_word_ball_size(const struct SfWordBall *ball, uint32_t r, size_t *out);

/**
 * # Safety
 * `ball` must come from `sf_word_ball_new` and not be freed twice. Null is ignored.
 */
void sf_word_ball_free(struct SfWordBall *ball);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SNOWFLAKE_H */
