#ifndef DUNKL_MOMENT_H
#define DUNKL_MOMENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DkStatus {
  DK_STATUS_OK = 0,
  DK_STATUS_NULL_POINTER = 1,
  DK_STATUS_DOMAIN = 2,
  DK_STATUS_CAPACITY = 3,
  DK_STATUS_NON_CONVERGENCE = 4,
  DK_STATUS_NUMERICAL = 5,
  DK_STATUS_INVALID_INPUT = 6,
  DK_STATUS_PANIC = 7,
} DkStatus;

// Opaque moment sequence.
typedef struct DkSequence DkSequence;

// Opaque truncated power series.
typedef struct DkSeries DkSeries;

// Strong-regularity report; `lc_violation` is `-1` when log-convexity holds.
typedef struct DkSrReport {
  bool lc_ok;
  int64_t lc_violation;
  bool mg_ok;
  double a1;
  bool snq_ok;
  double a2;
  double snq_tail_bound;
  uint64_t range;
} DkSrReport;

typedef struct DkComplex {
  double re;
  double im;
} DkComplex;

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *dk_last_error_message(void);

// Dunkl factorials `γ_{p,α}` cached for `p ≤ p_max`.
//
// # Safety
// `out` must be valid for writing one pointer.
enum DkStatus dk_sequence_dunkl(double alpha, size_t p_max, struct DkSequence **out);

// Factorials `p!` cached for `p ≤ p_max`.
//
// # Safety
// `out` must be valid for writing one pointer.
enum DkStatus dk_sequence_factorial(size_t p_max, struct DkSequence **out);

// Custom sequence from `len` positive values `m(0), …, m(len−1)`.
//
// # Safety
// `values` must point to `len` readable doubles; `out` must be writable.
enum DkStatus dk_sequence_from_values(const double *values, size_t len, struct DkSequence **out);

// # Safety
// `seq` must be NULL or a handle from a `dk_sequence_*` constructor that has
// not been freed.
void dk_sequence_free(struct DkSequence *seq);

// `log m(p)`.
//
// # Safety
// `seq` must be a live handle and `out` writable.
enum DkStatus dk_sequence_log_value(const struct DkSequence *seq, size_t p, double *out);

// `θ_p = m(p)/m(p−1)` for `p ≥ 1`.
//
// # Safety
// `seq` must be a live handle and `out` writable.
enum DkStatus dk_sequence_quotient(const struct DkSequence *seq, size_t p, double *out);

// Strong-regularity check on `p ≤ n`.
//
// # Safety
// `seq` must be a live handle and `out` writable.
enum DkStatus dk_sequence_check_sr(const struct DkSequence *seq, size_t n, struct DkSrReport *out);

// `E_m(z) = Σ z^p / m(p)` to relative tolerance `tol`.
//
// # Safety
// `seq` must be a live handle and `out` writable.
enum DkStatus dk_exp_m(const struct DkSequence *seq,
                       struct DkComplex z,
                       double tol,
                       struct DkComplex *out);

// Series with coefficients `coeffs[0..len]` (`len ≥ 1`).
//
// # Safety
// `coeffs` must point to `len` readable values; `out` must be writable.
enum DkStatus dk_series_new(const struct DkComplex *coeffs, size_t len, struct DkSeries **out);

// # Safety
// `series` must be NULL or a live handle from this library.
void dk_series_free(struct DkSeries *series);

// Number of stored coefficients (order + 1), or 0 for NULL.
//
// # Safety
// `series` must be NULL or a live handle.
size_t dk_series_len(const struct DkSeries *series);

// # Safety
// `series` must be a live handle and `out` writable.
enum DkStatus dk_series_coeff(const struct DkSeries *series, size_t index, struct DkComplex *out);

// Moment derivative `∂_m`, acting on coefficients as `c_p ↦ c_{p+1} θ_{p+1}`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum DkStatus dk_series_moment_derivative(const struct DkSeries *series,
                                          const struct DkSequence *seq,
                                          struct DkSeries **out);

// Dunkl operator `Λ_α` applied through its reflection formula.
//
// # Safety
// `series` must be live; `out` must be writable.
enum DkStatus dk_series_dunkl_apply(const struct DkSeries *series,
                                    double alpha,
                                    struct DkSeries **out);

// `τ_{y,m}` applied to the series.
//
// # Safety
// Handles must be live; `out` must be writable.
enum DkStatus dk_series_m_translate(const struct DkSeries *series,
                                    const struct DkSequence *seq,
                                    struct DkComplex y,
                                    struct DkSeries **out);

// Even translation `T_{y,m}` applied to the series.
//
// # Safety
// Handles must be live; `out` must be writable.
enum DkStatus dk_series_even_translate(const struct DkSeries *series,
                                       const struct DkSequence *seq,
                                       struct DkComplex y,
                                       struct DkSeries **out);

// # Safety
// `series` must be live and `out` writable.
enum DkStatus dk_series_evaluate(const struct DkSeries *series,
                                 struct DkComplex z,
                                 struct DkComplex *out);

// `K_ν(t)` for `t > 0`.
//
// # Safety
// `out` must be writable.
enum DkStatus dk_bessel_k(double nu, double t, double *out);

// Hamburger weight `ω_α(t)` for `−1 < α < −1/2`, `t ≠ 0`.
//
// # Safety
// `out` must be writable.
enum DkStatus dk_hamburger_weight(double alpha, double t, double *out);

// `∫ t^n ω_α(t) dt` and its error estimate.
//
// # Safety
// `value` and `error` must be writable.
enum DkStatus dk_moment_quadrature(size_t n, double alpha, double *value, double *error);

// Root search for a JSON problem
// `{c, omega, sequence: {family, alpha}, box: {re_min, re_max, im_min, im_max}, tol}`.
// On success `*out` receives a JSON report to be released with
// [`dk_string_free`].
//
// # Safety
// `problem` must be a NUL-terminated string; `out` must be writable.
enum DkStatus dk_find_roots_json(const char *problem, char **out);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void dk_string_free(char *s);

#endif  /* DUNKL_MOMENT_H */
