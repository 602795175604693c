#ifndef BAND_COUNTER_H
#define BAND_COUNTER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Half-line model selector for the splitting asymptotics.
 */
typedef enum BcHalflineKind {
  BC_HALFLINE_NEUMANN = 0,
  BC_HALFLINE_DIRICHLET = 1,
} BcHalflineKind;

/**
 * Status codes returned by every fallible FFI call.
 */
typedef enum BcStatus {
  BC_STATUS_OK = 0,
  /**
   * A pointer argument was null.
   */
  BC_STATUS_NULL_POINTER = 1,
  /**
   * A parameter was out of its documented domain.
   */
  BC_STATUS_INVALID_PARAMETER = 2,
  /**
   * An iterative solver failed to converge.
   */
  BC_STATUS_NO_CONVERGENCE = 3,
  /**
   * The requested quantity sits below the numeric resolution floor.
   */
  BC_STATUS_NUMERIC_FLOOR = 4,
  /**
   * The scan window holds too few momenta at this h.
   */
  BC_STATUS_WINDOW_TOO_SMALL = 5,
  /**
   * Any other solver-side failure; see `bc_last_error_message`.
   */
  BC_STATUS_INTERNAL = 6,
} BcStatus;

/**
 * Boundary-condition variant selector.
 */
typedef enum BcVariant {
  /**
   * Dirichlet at the lower endpoint, Neumann at the upper.
   */
  BC_VARIANT_MIXED_DN = 0,
  /**
   * Neumann at both endpoints.
   */
  BC_VARIANT_PURE_NN = 1,
} BcVariant;

/**
 * Opaque handle to a completed counting sweep.
 */
typedef struct BcCountResult BcCountResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the thread's last error message into `buffer` (NUL-terminated,
 * truncated to `length` bytes). Returns the full message length in bytes,
 * excluding the terminator, or −1 when `buffer` is null with nonzero length.
 */
int bc_last_error_message(char *buffer, uintptr_t length);

/**
 * Ground band value λ₀ of the strip fiber operator at angular momentum `m`.
 */
enum BcStatus bc_strip_band0(double l,
                             int64_t m,
                             double h,
                             enum BcVariant variant,
                             double *out_lambda0);

/**
 * Ground band value λ₀ of the annulus fiber operator at angular momentum `m`.
 */
enum BcStatus bc_annulus_band0(double r_inner,
                               int64_t m,
                               double h,
                               enum BcVariant variant,
                               double *out_lambda0);

/**
 * Runs the strip counting sweep; on success writes a handle that must be
 * released with `bc_count_result_free`.
 */
enum BcStatus bc_strip_count(double l,
                             double h,
                             enum BcVariant variant,
                             double tol,
                             struct BcCountResult **out_result);

/**
 * Runs the annulus counting sweep; same handle contract as `bc_strip_count`.
 */
enum BcStatus bc_annulus_count(double r_inner,
                               double h,
                               enum BcVariant variant,
                               double tol,
                               struct BcCountResult **out_result);

/**
 * Number of momenta whose ground band value lies below the Landau level h.
 */
enum BcStatus bc_count_result_count(const struct BcCountResult *result, uintptr_t *out_count);

/**
 * Closed-form asymptotic prediction for the count.
 */
enum BcStatus bc_count_result_predicted(const struct BcCountResult *result, double *out_predicted);

/**
 * Ratio of the computed count to the prediction.
 */
enum BcStatus bc_count_result_ratio(const struct BcCountResult *result, double *out_ratio);

/**
 * Inclusive momentum window `(lo, hi)` scanned by the sweep.
 */
enum BcStatus bc_count_result_window(const struct BcCountResult *result,
                                     int64_t *out_lo,
                                     int64_t *out_hi);

/**
 * Number of momenta the comparator could not resolve against the threshold.
 */
enum BcStatus bc_count_result_ambiguous(const struct BcCountResult *result,
                                        uintptr_t *out_ambiguous);

/**
 * Ground band value at one momentum of the sweep, if it was scanned.
 */
enum BcStatus bc_count_result_band0_at(const struct BcCountResult *result,
                                       int64_t m,
                                       double *out_lambda0);

/**
 * Releases a handle returned by one of the `_count` calls. Null is a no-op.
 */
void bc_count_result_free(struct BcCountResult *result);

/**
 * Half-line ground value μ₀ and its splitting μ₀ − h from the Landau level.
 */
enum BcStatus bc_halfline_splitting(enum BcHalflineKind kind,
                                    double xi,
                                    double h,
                                    double *out_mu0,
                                    double *out_splitting);

/**
 * Closed-form asymptotic count for the annulus with Dirichlet at `r_inner`.
 */
enum BcStatus bc_predict_annulus_count(double r_inner, double h, double *out_count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAND_COUNTER_H */
