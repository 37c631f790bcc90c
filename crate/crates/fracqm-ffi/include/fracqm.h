#ifndef FRACQM_H
#define FRACQM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum FqmStatus {
  FQM_STATUS_OK = 0,
  FQM_STATUS_NULL_POINTER = 1,
  FQM_STATUS_INVALID_PARAMETER = 2,
  FQM_STATUS_GRID_MISMATCH = 3,
  FQM_STATUS_REPRESENTATION = 4,
  FQM_STATUS_POTENTIAL = 5,
  FQM_STATUS_NON_CONVERGENCE = 6,
  FQM_STATUS_BRACKETING = 7,
  FQM_STATUS_EIGEN = 8,
  FQM_STATUS_OVERFLOW = 9,
  FQM_STATUS_BUFFER_TOO_SMALL = 10,
  FQM_STATUS_PANIC = 11,
} FqmStatus;

/**
 * Kinematic parameters (alpha, D, hbar).
 */
typedef struct FqmParams FqmParams;

/**
 * A wave function on a periodic grid.
 */
typedef struct FqmWave FqmWave;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, NUL terminated. Empty when
 * nothing has failed. Valid until the next failing call on the same thread.
 */
const char *fqm_last_error(void);

/**
 * Library version string, NUL terminated, static.
 */
const char *fqm_version(void);

/**
 * Creates parameters; alpha must lie in (1, 2], D and hbar must be positive.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum FqmStatus fqm_params_new(double alpha, double d_alpha, double hbar, struct FqmParams **out);

/**
 * # Safety
 * `p` must be null or a handle from [`fqm_params_new`] not yet freed.
 */
void fqm_params_free(struct FqmParams *p);

/**
 * Normalized Gaussian packet on an `n_points` grid of length `length`
 * centred at `x_center`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum FqmStatus fqm_wave_gaussian(size_t n_points,
                                 double length,
                                 double x_center,
                                 double hbar,
                                 double x0,
                                 double sigma,
                                 double p0,
                                 struct FqmWave **out);

/**
 * Wave function from interleaved (re, im) samples, `2 * n_points` doubles.
 *
 * # Safety
 * `values` must point to `2 * n_points` readable doubles; `out` must be valid
 * for a pointer write.
 */
enum FqmStatus fqm_wave_from_samples(size_t n_points,
                                     double length,
                                     double x_center,
                                     double hbar,
                                     const double *values,
                                     struct FqmWave **out);

/**
 * # Safety
 * `w` must be null or a live wave handle.
 */
void fqm_wave_free(struct FqmWave *w);

/**
 * Number of grid points, 0 for a null handle.
 *
 * # Safety
 * `w` must be null or a live wave handle.
 */
size_t fqm_wave_len(const struct FqmWave *w);

/**
 * Norm, sqrt(sum |psi|^2 dx).
 *
 * # Safety
 * `w` must be a live wave handle and `out` valid for a write.
 */
enum FqmStatus fqm_wave_norm(const struct FqmWave *w, double *out);

/**
 * Position density |psi(x_j)|^2 into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `w` must be a live wave handle and `buf` writable for `len` doubles.
 */
enum FqmStatus fqm_wave_density(const struct FqmWave *w, double *buf, size_t len);

/**
 * Propagates `w` in place by the free evolution over time `t`.
 *
 * # Safety
 * `w` and `p` must be live handles.
 */
enum FqmStatus fqm_wave_evolve_free(struct FqmWave *w, const struct FqmParams *p, double t);

/**
 * Free propagator K(x, t) with default series control.
 *
 * # Safety
 * `p` must be a live handle; `re` and `im` valid for writes.
 */
enum FqmStatus fqm_free_kernel(const struct FqmParams *p,
                               double x,
                               double t,
                               double *re,
                               double *im);

/**
 * Free thermal density matrix rho(x, beta).
 *
 * # Safety
 * `p` must be a live handle; `out` valid for a write.
 */
enum FqmStatus fqm_free_density(const struct FqmParams *p, double x, double beta, double *out);

/**
 * Infinite well levels E_1..E_len of half-width `a` into `buf`.
 *
 * # Safety
 * `p` must be a live handle; `buf` writable for `len` doubles.
 */
enum FqmStatus fqm_infinite_well_levels(const struct FqmParams *p,
                                        double a,
                                        double *buf,
                                        size_t len);

/**
 * Bohr levels E_1..E_len of charge `z` with coupling `e2` into `buf`.
 *
 * # Safety
 * `p` must be a live handle; `buf` writable for `len` doubles.
 */
enum FqmStatus fqm_bohr_levels(const struct FqmParams *p,
                               double z,
                               double e2,
                               double *buf,
                               size_t len);

/**
 * Bound-state energy of the attractive delta well of strength `gamma`.
 *
 * # Safety
 * `p` must be a live handle; `out` valid for a write.
 */
enum FqmStatus fqm_delta_well_energy(const struct FqmParams *p, double gamma, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACQM_H */
