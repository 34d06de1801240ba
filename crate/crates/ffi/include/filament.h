#ifndef FILAMENT_H
#define FILAMENT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FilamentCurveKind {
  FILAMENT_CURVE_KIND_UNIT_CIRCLE = 0,
  // `p1` = radius.
  FILAMENT_CURVE_KIND_CIRCLE = 1,
  // `p1`, `p2` = semi-axes.
  FILAMENT_CURVE_KIND_ELLIPSE = 2,
  FILAMENT_CURVE_KIND_TREFOIL = 3,
  // `p1` = amplitude, `p2` = mode.
  FILAMENT_CURVE_KIND_PERTURBED_CIRCLE = 4,
} FilamentCurveKind;

typedef enum FilamentStatus {
  FILAMENT_STATUS_OK = 0,
  FILAMENT_STATUS_NULL_POINTER = 1,
  FILAMENT_STATUS_INVALID_ARGUMENT = 2,
  FILAMENT_STATUS_DEGENERATE_CURVE = 3,
  FILAMENT_STATUS_POLYGON_MODE = 4,
  FILAMENT_STATUS_OUTSIDE_TUBE = 5,
  FILAMENT_STATUS_STEP_TOO_LARGE = 6,
  FILAMENT_STATUS_PARSE = 7,
  FILAMENT_STATUS_IO = 8,
  FILAMENT_STATUS_CONFIG = 9,
  FILAMENT_STATUS_INTERNAL = 10,
} FilamentStatus;

// Opaque closed curve.
typedef struct FilamentCurve FilamentCurve;

// Opaque mollified Biot–Savart field.
typedef struct FilamentField FilamentField;

// Opaque flow trajectory.
typedef struct FilamentTrajectory FilamentTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *filament_last_error(void);

// Builds a built-in curve with `n` samples.
//
// # Safety
// `out_curve` must be a valid pointer to writable storage for one handle.
enum FilamentStatus filament_curve_builtin(enum FilamentCurveKind kind,
                                           double p1,
                                           double p2,
                                           size_t n,
                                           struct FilamentCurve **out_curve);

// Builds a curve from `count` closed-curve points given as packed xyz
// triples, resampled to `n` arclength-uniform samples.
//
// # Safety
// `xyz` must point to `3 * count` doubles; `out_curve` must be writable.
enum FilamentStatus filament_curve_from_points(const double *xyz,
                                               size_t count,
                                               size_t n,
                                               struct FilamentCurve **out_curve);

// Loads a `.csv` or `.json` curve file.
//
// # Safety
// `path` must be a NUL-terminated string; `out_curve` must be writable.
enum FilamentStatus filament_curve_load(const char *path, struct FilamentCurve **out_curve);

// # Safety
// `curve` must be NULL or a handle from this library, not yet freed.
void filament_curve_free(struct FilamentCurve *curve);

// Number of samples.
//
// # Safety
// `curve` must be a live handle.
enum FilamentStatus filament_curve_len(const struct FilamentCurve *curve, size_t *out_n);

// Total length.
//
// # Safety
// `curve` must be a live handle; `out_length` writable.
enum FilamentStatus filament_curve_length(const struct FilamentCurve *curve, double *out_length);

// Sample `i` as xyz.
//
// # Safety
// `curve` must be a live handle; `out_xyz` must hold 3 doubles.
enum FilamentStatus filament_curve_sample(const struct FilamentCurve *curve,
                                          size_t i,
                                          double *out_xyz);

// Weak L^{1,∞} norm of the curvature majorant and the smallest security
// radius.
//
// # Safety
// `curve` must be a live handle; both outputs writable.
enum FilamentStatus filament_curve_geometry(const struct FilamentCurve *curve,
                                            double *out_weak_norm,
                                            double *out_min_radius);

// Mollified field of `curve` at scale `epsilon`. The field keeps its own
// reference to the curve.
//
// # Safety
// `curve` must be a live handle; `out_field` writable.
enum FilamentStatus filament_field_new(const struct FilamentCurve *curve,
                                       double epsilon,
                                       struct FilamentField **out_field);

// # Safety
// `field` must be NULL or a live handle.
void filament_field_free(struct FilamentField *field);

// Velocity at `x`.
//
// # Safety
// `field` must be a live handle; `x` and `out_v` must hold 3 doubles.
enum FilamentStatus filament_field_velocity(const struct FilamentField *field,
                                            const double *x,
                                            double *out_v);

// ∫|v^ε|² over space.
//
// # Safety
// `field` must be a live handle; `out_energy` writable.
enum FilamentStatus filament_field_energy(const struct FilamentField *field, double *out_energy);

// Integrates the binormal flow to `t_final` with step `dt`, storing every
// state.
//
// # Safety
// `curve` must be a live handle; `out_traj` writable.
enum FilamentStatus filament_evolve(const struct FilamentCurve *curve,
                                    double dt,
                                    double t_final,
                                    struct FilamentTrajectory **out_traj);

// # Safety
// `traj` must be NULL or a live handle.
void filament_trajectory_free(struct FilamentTrajectory *traj);

// Number of stored states.
//
// # Safety
// `traj` must be a live handle; `out_n` writable.
enum FilamentStatus filament_trajectory_len(const struct FilamentTrajectory *traj, size_t *out_n);

// State `k` as a new curve handle (free it separately) and its time.
//
// # Safety
// `traj` must be a live handle; outputs writable.
enum FilamentStatus filament_trajectory_state(const struct FilamentTrajectory *traj,
                                              size_t k,
                                              double *out_t,
                                              struct FilamentCurve **out_curve);

// Runs the verification harness on a JSON configuration and returns the
// JSON report. `out_passed` receives 1 iff every record passed.
//
// # Safety
// `config_json` must be NUL-terminated; outputs writable. Release the
// report with [`filament_string_free`].
enum FilamentStatus filament_verify_json(const char *config_json,
                                         char **out_report,
                                         int32_t *out_passed);

// # Safety
// `s` must be NULL or a string returned by this library.
void filament_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FILAMENT_H */
