#ifndef NGTMST_H
#define NGTMST_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NgtStatus {
  NGT_STATUS_OK = 0,
  NGT_STATUS_NULL_POINTER = 1,
  NGT_STATUS_DOMAIN = 2,
  NGT_STATUS_ORDER_TOO_LARGE = 3,
  NGT_STATUS_SINGULAR_COVARIANCE = 4,
  NGT_STATUS_NEGLIGIBLE_PROBABILITY = 5,
  NGT_STATUS_TAIL_TOO_LARGE = 6,
  NGT_STATUS_NO_MINIMUM_IN_RANGE = 7,
  NGT_STATUS_NON_DECAYING_KERNEL = 8,
  NGT_STATUS_CONFIG = 9,
  NGT_STATUS_IO = 10,
  NGT_STATUS_PANIC = 11,
} NgtStatus;

/**
 * Heralded density matrix produced by the oracle.
 */
typedef struct NgtHerald NgtHerald;

/**
 * Fock-basis oracle with its operator caches.
 */
typedef struct NgtOracle NgtOracle;

/**
 * State parameters (λ, κ, τ, m, n).
 */
typedef struct NgtParams NgtParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL if none. Valid until the
 * next failing call on the same thread.
 */
const char *ngt_last_error(void);

void ngt_clear_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ngt_version(void);

/**
 * # Safety
 * `out` must be valid for writes. The handle is released with `ngt_params_free`.
 */
enum NgtStatus ngt_params_new(double lambda,
                              double kappa,
                              double tau,
                              size_t m,
                              size_t n,
                              struct NgtParams **out);

/**
 * Same as `ngt_params_new` from squeezing r and mean thermal photon number.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NgtStatus ngt_params_from_physical(double r_sq,
                                        double n_th,
                                        double tau,
                                        size_t m,
                                        size_t n,
                                        struct NgtParams **out);

/**
 * # Safety
 * `p` must come from `ngt_params_new` or be NULL, and must not be used afterwards.
 */
void ngt_params_free(struct NgtParams *p);

/**
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_success_probability(const struct NgtParams *p, double *out);

/**
 * Parity of output port 2 at phase φ (operating point biased by π/2).
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_parity_expectation(const struct NgtParams *p, double phi, double *out);

/**
 * Δφ; +inf where the parity slope vanishes.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_phase_uncertainty(const struct NgtParams *p, double phi, double *out);

/**
 * Δφ of the un-heralded squeezed thermal input.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NgtStatus ngt_phase_uncertainty_tmst(double lambda, double kappa, double phi, double *out);

/**
 * Normalized Wigner function at xi = (q1, p1, q2, p2).
 *
 * # Safety
 * `xi` must point to 4 doubles; other pointers valid or NULL.
 */
enum NgtStatus ngt_wigner(const struct NgtParams *p, const double *xi, double *out);

/**
 * Δφ_TMST − Δφ of the heralded state.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_merit_thermal(const struct NgtParams *p, double phi, double *out);

/**
 * As `ngt_merit_thermal`, restricted to κ = 1/2.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_merit_vacuum(const struct NgtParams *p, double phi, double *out);

/**
 * Squeezing in [r_lo, r_hi] minimizing Δφ for fixed (κ, τ, m, n, φ).
 *
 * # Safety
 * `r_opt` and `delta_phi` must be valid for writes.
 */
enum NgtStatus ngt_find_optimal_squeezing(double kappa,
                                          double tau,
                                          size_t m,
                                          size_t n,
                                          double phi,
                                          double r_lo,
                                          double r_hi,
                                          double *r_opt,
                                          double *delta_phi);

/**
 * Oracle with a fixed photon-number cutoff, or automatic escalation when `cutoff` is 0.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NgtStatus ngt_oracle_new(size_t cutoff, struct NgtOracle **out);

/**
 * # Safety
 * `o` must come from `ngt_oracle_new` or be NULL.
 */
void ngt_oracle_free(struct NgtOracle *o);

/**
 * Heralds the squeezed thermal state (r, n_th) with ancilla |m>, beamsplitter τ and detection of n.
 *
 * # Safety
 * `o` must be a live oracle; `out` valid for writes.
 */
enum NgtStatus ngt_oracle_herald(struct NgtOracle *o,
                                 double r_sq,
                                 double n_th,
                                 double tau,
                                 size_t m,
                                 size_t n,
                                 struct NgtHerald **out);

/**
 * # Safety
 * `h` must come from `ngt_oracle_herald` or be NULL.
 */
void ngt_herald_free(struct NgtHerald *h);

/**
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_herald_probability(const struct NgtHerald *h, double *out);

/**
 * Cutoff actually used and the residual truncation tail.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_herald_truncation(const struct NgtHerald *h, size_t *cutoff, double *tail);

/**
 * # Safety
 * `xi` must point to 4 doubles; other pointers valid or NULL.
 */
enum NgtStatus ngt_herald_wigner(const struct NgtHerald *h, const double *xi, double *out);

/**
 * Oracle parity at phase φ, same convention as `ngt_parity_expectation`.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum NgtStatus ngt_oracle_parity_expectation(struct NgtOracle *o,
                                             const struct NgtHerald *h,
                                             double phi,
                                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NGTMST_H */
