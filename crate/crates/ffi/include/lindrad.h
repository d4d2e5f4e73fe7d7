// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LINDRAD_H
#define LINDRAD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Zero means success.
 */
typedef enum LindradStatus {
  LINDRAD_STATUS_OK = 0,
  LINDRAD_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside the domain of the operation.
   */
  LINDRAD_STATUS_DOMAIN = 2,
  LINDRAD_STATUS_INTEGRATION = 3,
  LINDRAD_STATUS_RECOIL_OUT_OF_RANGE = 4,
  LINDRAD_STATUS_QUADRATURE = 5,
  /**
   * Step size above a stability bound.
   */
  LINDRAD_STATUS_CFL = 6,
  LINDRAD_STATUS_RESOLUTION = 7,
  LINDRAD_STATUS_BLOW_UP = 8,
  LINDRAD_STATUS_CONFIG = 9,
  LINDRAD_STATUS_IO = 10,
  LINDRAD_STATUS_INDEX_OUT_OF_RANGE = 11,
  LINDRAD_STATUS_PANIC = 12,
} LindradStatus;

/**
 * Classical trajectory models.
 */
typedef enum LindradModel {
  LINDRAD_MODEL_LORENTZ = 0,
  LINDRAD_MODEL_LANDAU_LIFSHITZ = 1,
  LINDRAD_MODEL_VF_EHRENFEST = 2,
  LINDRAD_MODEL_SOKOLOV_VARIANT = 3,
} LindradModel;

typedef struct LindradConstants LindradConstants;

typedef struct LindradField LindradField;

typedef struct LindradLindbladDemo LindradLindbladDemo;

typedef struct LindradTrajectory LindradTrajectory;

/**
 * Plain copy of the model constants.
 */
typedef struct LindradConstantValues {
  double alpha;
  double m;
  double lambda_bar;
  double tau0;
  double sigma;
  double sigma_minus;
  double e_cr;
} LindradConstantValues;

/**
 * Classical state; `pi` is the kinetic momentum.
 */
typedef struct LindradState {
  double t;
  double x[3];
  double pi[3];
  double gamma;
} LindradState;

typedef struct LindradRatios {
  double dq_over_dc;
  double frad_over_f;
  double rr_over_diff;
} LindradRatios;

/**
 * One row of the Lindblad demo output.
 */
typedef struct LindradDemoSample {
  double t;
  double pop_pes;
  double pop_nes;
  double trace;
  double min_eig;
  double purity;
} LindradDemoSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a
 * success. Valid until the next call on the same thread.
 */
const char *lindrad_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lindrad_version(void);

/**
 * Constants derived from `alpha` and `m`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum LindradStatus lindrad_constants_new(double alpha, double m, struct LindradConstants **out);

/**
 * Physical electron constants (α = 1/137.035999084, m = 1).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum LindradStatus lindrad_constants_physical(struct LindradConstants **out);

/**
 * Overrides τ₀ (zero switches off radiation-reaction corrections).
 *
 * # Safety
 * `c` must be a live handle from `lindrad_constants_new`.
 */
enum LindradStatus lindrad_constants_set_tau0(struct LindradConstants *c, double tau0);

/**
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum LindradStatus lindrad_constants_get(const struct LindradConstants *c,
                                         struct LindradConstantValues *out);

/**
 * # Safety
 * `c` must be NULL or a handle not yet freed.
 */
void lindrad_constants_free(struct LindradConstants *c);

/**
 * Field B(x) = b0 + Gᵀx with `grad_b` row-major, G[i][j] = ∂ᵢB_j,
 * divergence-free. `grad_b` may be NULL for a uniform field.
 *
 * # Safety
 * `b0` must point to 3 doubles, `grad_b` to 9 doubles or be NULL, `out`
 * must be valid.
 */
enum LindradStatus lindrad_field_new(const double *b0,
                                     const double *grad_b,
                                     struct LindradField **out);

/**
 * # Safety
 * `f` must be NULL or a handle not yet freed.
 */
void lindrad_field_free(struct LindradField *f);

/**
 * Integrates `steps` RK4 steps of size `dt` from `initial` (its `gamma`
 * field is ignored); the result holds `steps + 1` states.
 *
 * # Safety
 * All pointers must be valid; handles must be live.
 */
enum LindradStatus lindrad_trajectory_integrate(enum LindradModel model,
                                                const struct LindradConstants *consts,
                                                const struct LindradField *field,
                                                const struct LindradState *initial,
                                                double dt,
                                                uintptr_t steps,
                                                struct LindradTrajectory **out);

/**
 * Number of stored states; 0 for NULL.
 *
 * # Safety
 * `t` must be NULL or a live handle.
 */
uintptr_t lindrad_trajectory_len(const struct LindradTrajectory *t);

/**
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum LindradStatus lindrad_trajectory_get(const struct LindradTrajectory *t,
                                          uintptr_t index,
                                          struct LindradState *out);

/**
 * # Safety
 * `t` must be NULL or a handle not yet freed.
 */
void lindrad_trajectory_free(struct LindradTrajectory *t);

/**
 * Local radiation-reaction force for velocity `xdot` and acceleration
 * `xddot`, written to `out[3]`.
 *
 * # Safety
 * `xdot`, `xddot` and `out` must each point to 3 doubles.
 */
enum LindradStatus lindrad_rr_force_lcfa(const struct LindradConstants *consts,
                                         const double *xdot,
                                         const double *xddot,
                                         double *out);

/**
 * Order-of-magnitude ratios at field E/E_cr, Lorentz factor `gamma` and
 * momentum spread Δp/m.
 *
 * # Safety
 * `consts` must be live and `out` valid.
 */
enum LindradStatus lindrad_estimate_ratios(const struct LindradConstants *consts,
                                           double e_over_ecr,
                                           double gamma,
                                           double delta_p_over_m,
                                           struct LindradRatios *out);

/**
 * Relaxes a negative-energy state at momentum `p[3]` under the two
 * vacuum channels; the result holds `steps + 1` samples.
 *
 * # Safety
 * `p` must point to 3 doubles and `out` must be valid.
 */
enum LindradStatus lindrad_lindblad_demo_run(const double *p,
                                             double m,
                                             double sigma_plus,
                                             double sigma_minus,
                                             double dt,
                                             uintptr_t steps,
                                             struct LindradLindbladDemo **out);

/**
 * # Safety
 * `d` must be NULL or a live handle.
 */
uintptr_t lindrad_lindblad_demo_len(const struct LindradLindbladDemo *d);

/**
 * # Safety
 * `d` must be a live handle and `out` valid.
 */
enum LindradStatus lindrad_lindblad_demo_get(const struct LindradLindbladDemo *d,
                                             uintptr_t index,
                                             struct LindradDemoSample *out);

/**
 * # Safety
 * `d` must be NULL or a handle not yet freed.
 */
void lindrad_lindblad_demo_free(struct LindradLindbladDemo *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINDRAD_H */
