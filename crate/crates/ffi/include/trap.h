#ifndef TRAP_H
#define TRAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum {
  TRAP_STATUS_OK = 0,
  TRAP_STATUS_NULL_POINTER = 1,
  TRAP_STATUS_DOMAIN = 2,
  TRAP_STATUS_NUMERICAL = 3,
  TRAP_STATUS_SINGLE_WELL = 4,
  TRAP_STATUS_UNCONFINED = 5,
  TRAP_STATUS_DEGENERATE_GEOMETRY = 6,
  TRAP_STATUS_NO_SOLUTION = 7,
  TRAP_STATUS_AMBIGUOUS = 8,
  TRAP_STATUS_NO_FREQUENCY = 9,
  TRAP_STATUS_CONFIG = 10,
  TRAP_STATUS_OUT_OF_RANGE = 11,
  TRAP_STATUS_PANIC = 12,
} TrapStatus;

/**
 * Tunneling regime of the lowest pair.
 */
typedef enum {
  TRAP_REGIME_TUNNELING = 0,
  TRAP_REGIME_NO_BOUND_PAIR = 1,
  TRAP_REGIME_BELOW_RESOLUTION = 2,
} TrapRegime;

/**
 * Trap geometry and electrode voltages.
 */
typedef struct TrapModel TrapModel;

/**
 * Lowest eigenpairs of the dimensionless double well.
 */
typedef struct TrapSpectrum TrapSpectrum;

/**
 * `U(δ) = u0 + a δ⁴ − b δ²` with `δ` the offset from the trap center in
 * units of r1; energies in joules.
 */
typedef struct {
  double a;
  double b;
  double u0;
} TrapQuartic;

typedef struct {
  /**
   * Distance between the minima, m.
   */
  double well_distance;
  /**
   * Barrier height, J.
   */
  double barrier_height;
  /**
   * Non-zero when the barrier is below the quantum energy scale.
   */
  int sub_quantum;
} TrapShape;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (always
 * NUL-terminated when `len > 0`) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t trap_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *trap_version(void);

/**
 * Creates a model; `r1` in meters, voltages in volts.
 *
 * # Safety
 * `out` must be a valid pointer to a `TrapModel*`.
 */
TrapStatus trap_model_new(double r1,
                          double r2_tilde,
                          double zc_tilde,
                          double v1,
                          double v2,
                          double v3,
                          TrapModel **out);

/**
 * # Safety
 * `model` must be null or a handle from `trap_model_new` not yet freed.
 */
void trap_model_free(TrapModel *model);

/**
 * # Safety
 * `model` must be a live handle.
 */
TrapStatus trap_model_set_v3(TrapModel *model, double v3);

/**
 * On-axis potential in volts at `z_tilde = z / r1`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
TrapStatus trap_model_potential(const TrapModel *model, double z_tilde, double *out);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
TrapStatus trap_model_coefficients(const TrapModel *model, TrapQuartic *out);

/**
 * V3 at which the double well forms, for the model's V1 and V2.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
TrapStatus trap_model_transition_voltage(const TrapModel *model, double *out);

/**
 * Well distance and barrier; `TrapStatus::SingleWell` outside the
 * double-well regime.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
TrapStatus trap_model_shape(const TrapModel *model, TrapShape *out);

/**
 * Classical axial frequency in Hz; distance in m, barrier in J.
 *
 * # Safety
 * `out` must be writable.
 */
TrapStatus trap_classical_frequency(double well_distance, double barrier_height, double *out);

/**
 * Tunneling frequency in Hz. `regime` (optional) is always written when
 * the solve succeeds; `frequency` only in the tunneling regime, otherwise
 * the call returns `TrapStatus::NoFrequency`.
 *
 * # Safety
 * `frequency` must be writable; `regime` null or writable.
 */
TrapStatus trap_tunneling_frequency(double well_distance,
                                    double barrier_height,
                                    double *frequency,
                                    TrapRegime *regime);

/**
 * Lowest `levels` eigenpairs for barrier `eb_tilde` on `[-half_width,
 * half_width]` with `points` grid points (odd).
 *
 * # Safety
 * `out` must be a valid pointer to a `TrapSpectrum*`.
 */
TrapStatus trap_spectrum_new(double eb_tilde,
                             size_t levels,
                             double half_width,
                             size_t points,
                             TrapSpectrum **out);

/**
 * # Safety
 * `spectrum` must be null or a handle from `trap_spectrum_new` not yet freed.
 */
void trap_spectrum_free(TrapSpectrum *spectrum);

/**
 * Number of levels, 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle.
 */
size_t trap_spectrum_levels(const TrapSpectrum *spectrum);

/**
 * Number of grid points, 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle.
 */
size_t trap_spectrum_points(const TrapSpectrum *spectrum);

/**
 * Eigenvalue `index` in units of ħ²/(2mL²), measured from the barrier top.
 *
 * # Safety
 * `spectrum` must be a live handle and `out` writable.
 */
TrapStatus trap_spectrum_eigenvalue(const TrapSpectrum *spectrum, size_t index, double *out);

/**
 * Copies eigenvector `index` (normalized so that Σφ²h = 1) into `buf`,
 * which must hold `trap_spectrum_points` values.
 *
 * # Safety
 * `spectrum` must be a live handle; `buf` must point to `len` doubles.
 */
TrapStatus trap_spectrum_eigenvector(const TrapSpectrum *spectrum,
                                     size_t index,
                                     double *buf,
                                     size_t len);

/**
 * Grid coordinate `ζ_j` in units of L.
 *
 * # Safety
 * `spectrum` must be a live handle and `out` writable.
 */
TrapStatus trap_spectrum_grid_point(const TrapSpectrum *spectrum, size_t index, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRAP_H */
