#ifndef CONEMOD_H
#define CONEMOD_H

/* Generated by cbindgen from the conemod-ffi sources; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum ConemodStatus {
  /*
   Success.
   */
  CONEMOD_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  CONEMOD_STATUS_NULL_POINTER = 1,
  /*
   Malformed input: bad JSON, invalid UTF-8, unknown fields.
   */
  CONEMOD_STATUS_INVALID_INPUT = 2,
  /*
   Grid parameters out of range.
   */
  CONEMOD_STATUS_INVALID_GRID = 3,
  /*
   The state does not have unit norm.
   */
  CONEMOD_STATUS_NOT_NORMALIZED = 4,
  /*
   The state is not supported in the unit ball.
   */
  CONEMOD_STATUS_SUPPORT_VIOLATION = 5,
  /*
   The point lies on the singular set of the flow.
   */
  CONEMOD_STATUS_SINGULAR_POINT = 6,
  /*
   File-system error.
   */
  CONEMOD_STATUS_IO = 7,
  /*
   Any other numerical error.
   */
  CONEMOD_STATUS_NUMERICAL = 8,
  /*
   A panic was caught at the boundary.
   */
  CONEMOD_STATUS_PANIC = 9,
} ConemodStatus;

/*
 Opaque grid handle.
 */
typedef struct ConemodGrid ConemodGrid;

/*
 Opaque handle of a suite report together with its JSON text.
 */
typedef struct ConemodReport ConemodReport;

/*
 Opaque handle of a unit-norm Majorana state.
 */
typedef struct ConemodState ConemodState;

/*
 Entropy values of one state.
 */
typedef struct ConemodEntropy {
  /*
   Route through the modular generator.
   */
  double s_generator;
  /*
   Momentum-space route.
   */
  double s_fourier;
  /*
   Route through the weighted energy density.
   */
  double s_energy;
  /*
   Relative deviation between the generator and Fourier routes.
   */
  double dev_generator_fourier;
  /*
   Relative deviation between the generator and energy routes.
   */
  double dev_generator_energy;
  /*
   Relative deviation between the Fourier and energy routes.
   */
  double dev_fourier_energy;
} ConemodEntropy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *conemod_version(void);

/*
 Message of the last failed call on this thread (empty after a success).
 Valid until the next call into the library on the same thread.
 */
const char *conemod_last_error(void);

/*
 The conformal factor `τ(λ, x)` for `x = (x0, x1, x2, x3)`.

 # Safety
 `x` must point to four doubles and `out` to one writable double.
 */
enum ConemodStatus conemod_tau(double lambda, const double *x, double *out);

/*
 The image `ν_λ(x)` of `x = (x0, x1, x2, x3)` under the conformal flow.

 # Safety
 `x` must point to four doubles and `out` to four writable doubles.
 */
enum ConemodStatus conemod_flow(double lambda, const double *x, double *out);

/*
 Creates a grid of `points` nodes per axis on `[−half_width, half_width)³`.

 # Safety
 `out` must point to a writable handle pointer.
 */
enum ConemodStatus conemod_grid_new(double half_width, size_t points, struct ConemodGrid **out);

/*
 Releases a grid handle. Null is ignored.

 # Safety
 `grid` must be null or a handle returned by [`conemod_grid_new`] that has
 not been freed.
 */
void conemod_grid_free(struct ConemodGrid *grid);

/*
 Samples a JSON state description on `grid`, embeds it as a Majorana
 state and rescales it to unit norm.

 # Safety
 `grid` must be a live grid handle, `json` a NUL-terminated string and
 `out` a writable handle pointer.
 */
enum ConemodStatus conemod_state_from_json(const struct ConemodGrid *grid,
                                           const char *json,
                                           struct ConemodState **out);

/*
 The factor applied to reach unit norm, or NaN for a null handle.

 # Safety
 `state` must be null or a live state handle.
 */
double conemod_state_normalization_factor(const struct ConemodState *state);

/*
 Releases a state handle. Null is ignored.

 # Safety
 `state` must be null or a handle returned by [`conemod_state_from_json`]
 that has not been freed.
 */
void conemod_state_free(struct ConemodState *state);

/*
 Evaluates the three entropy routes on a state.

 # Safety
 `state` must be a live state handle and `out` a writable struct.
 */
enum ConemodStatus conemod_entropy(const struct ConemodState *state, struct ConemodEntropy *out);

/*
 Runs a verification suite described by a JSON run configuration.

 # Safety
 `config_json` must be a NUL-terminated string and `out` a writable
 handle pointer.
 */
enum ConemodStatus conemod_run_suite(const char *config_json, struct ConemodReport **out);

/*
 Whether every check of the report passed; false for a null handle.

 # Safety
 `report` must be null or a live report handle.
 */
bool conemod_report_pass(const struct ConemodReport *report);

/*
 The report as JSON, owned by the handle; null for a null handle.

 # Safety
 `report` must be null or a live report handle.
 */
const char *conemod_report_json(const struct ConemodReport *report);

/*
 Releases a report handle. Null is ignored.

 # Safety
 `report` must be null or a handle returned by [`conemod_run_suite`] that
 has not been freed.
 */
void conemod_report_free(struct ConemodReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONEMOD_H */
