#ifndef HWM_H
#define HWM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum HwmStatus {
  HWM_STATUS_OK = 0,
  HWM_STATUS_INVALID_ARGUMENT = 1,
  HWM_STATUS_RANGE = 2,
  HWM_STATUS_DOMAIN = 3,
  HWM_STATUS_EIGEN_SOLVER = 4,
  HWM_STATUS_NUMERICAL = 5,
  HWM_STATUS_UNDEFINED_MEAN = 6,
  HWM_STATUS_CONE_MISMATCH = 7,
  HWM_STATUS_FORMAT = 8,
  HWM_STATUS_IO = 9,
  HWM_STATUS_NULL_POINTER = 10,
  HWM_STATUS_BUFFER_TOO_SMALL = 11,
  HWM_STATUS_PANIC = 12,
} HwmStatus;

typedef enum HwmParity {
  HWM_PARITY_EVEN = 0,
  HWM_PARITY_ODD = 1,
} HwmParity;

typedef enum HwmWindow {
  HWM_WINDOW_NONE = 0,
  HWM_WINDOW_HANN = 1,
} HwmWindow;

/**
 * Grid-oracle operators for [`hwm_grid_mean`].
 */
typedef enum HwmOperator {
  HWM_OPERATOR_LZ = 0,
  HWM_OPERATOR_PX = 1,
  HWM_OPERATOR_PY = 2,
  /**
   * `l_z² + f² p_x²`, using the `f` argument.
   */
  HWM_OPERATOR_ELLIPTIC = 3,
} HwmOperator;

/**
 * Sampled complex field.
 */
typedef struct HwmField HwmField;

/**
 * Mathieu characteristic value and coefficients.
 */
typedef struct HwmMathieu HwmMathieu;

/**
 * Topological-charge amplitudes.
 */
typedef struct HwmOam HwmOam;

/**
 * Angular spectrum on the ring of transverse wavevectors.
 */
typedef struct HwmRing HwmRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread; empty after a
 * success. Valid until the next call on the same thread.
 */
const char *hwm_last_error_message(void);

/**
 * `J_n(x)` for `|n| ≤ 200`, `|x| ≤ 1e4`.
 *
 * # Safety
 * `out` must be valid for writing one `double`.
 */
enum HwmStatus hwm_bessel_j(int32_t n, double x, double *out);

/**
 * Solves the Mathieu eigen-system of order `n` and the given parity.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum HwmStatus hwm_mathieu_new(enum HwmParity parity,
                               uint32_t n,
                               double q,
                               struct HwmMathieu **out);

/**
 * # Safety
 * `m` must come from [`hwm_mathieu_new`] and not be used afterwards.
 */
void hwm_mathieu_free(struct HwmMathieu *m);

/**
 * Characteristic value `a_n(q)` or `b_n(q)`.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for one `double`.
 */
enum HwmStatus hwm_mathieu_char_value(const struct HwmMathieu *m, double *out);

/**
 * Number of stored coefficients (indexed by harmonic).
 *
 * # Safety
 * `m` must be a live handle and `out` valid for one `size_t`.
 */
enum HwmStatus hwm_mathieu_coeff_count(const struct HwmMathieu *m, size_t *out);

/**
 * Copies the coefficients, indexed by harmonic `j`, into `buf`.
 *
 * # Safety
 * `m` must be a live handle and `buf` valid for `len` doubles.
 */
enum HwmStatus hwm_mathieu_coeffs(const struct HwmMathieu *m, double *buf, size_t len);

/**
 * Angular function `ce_n(η, q)` or `se_n(η, q)`.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for one `double`.
 */
enum HwmStatus hwm_mathieu_angular(const struct HwmMathieu *m, double eta, double *out);

/**
 * Samples the wave described by `label` (for example
 * `"bessel k=1 theta=0.5 n=2"`) on an `nx × ny` grid centered on the axis.
 *
 * # Safety
 * `label` must be a nul-terminated string and `out` valid for one pointer.
 */
enum HwmStatus hwm_field_generate(const char *label,
                                  size_t nx,
                                  size_t ny,
                                  double dx,
                                  double dy,
                                  double z,
                                  struct HwmField **out);

/**
 * Reads an HWMF1 field file.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` valid for one pointer.
 */
enum HwmStatus hwm_field_read(const char *path, struct HwmField **out);

/**
 * Writes an HWMF1 field file.
 *
 * # Safety
 * `field` must be a live handle and `path` a nul-terminated string.
 */
enum HwmStatus hwm_field_write(const struct HwmField *field, const char *path);

/**
 * # Safety
 * `field` must be a live handle; `nx` and `ny` valid for one `size_t` each.
 */
enum HwmStatus hwm_field_dims(const struct HwmField *field, size_t *nx, size_t *ny);

/**
 * Copies samples as interleaved `(re, im)` doubles, row-major with `y`
 * outermost. `len` counts doubles and must be at least `2·nx·ny`.
 *
 * # Safety
 * `field` must be a live handle and `buf` valid for `len` doubles.
 */
enum HwmStatus hwm_field_values(const struct HwmField *field, double *buf, size_t len);

/**
 * # Safety
 * `field` must come from this library and not be used afterwards.
 */
void hwm_field_free(struct HwmField *field);

/**
 * Ring spectrum of a field at `ring_samples` azimuths.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for one pointer.
 */
enum HwmStatus hwm_ring_from_field(const struct HwmField *field,
                                   size_t ring_samples,
                                   enum HwmWindow window,
                                   struct HwmRing **out);

/**
 * # Safety
 * `ring` must be a live handle and `out` valid for one `size_t`.
 */
enum HwmStatus hwm_ring_len(const struct HwmRing *ring, size_t *out);

/**
 * Interleaved `(re, im)` ring samples; `len` counts doubles.
 *
 * # Safety
 * `ring` must be a live handle and `buf` valid for `len` doubles.
 */
enum HwmStatus hwm_ring_samples(const struct HwmRing *ring, double *buf, size_t len);

/**
 * `(2π/M) Σ|φ_m|²`.
 *
 * # Safety
 * `ring` must be a live handle and `out` valid for one `double`.
 */
enum HwmStatus hwm_ring_parseval_norm(const struct HwmRing *ring, double *out);

/**
 * # Safety
 * `ring` must come from this library and not be used afterwards.
 */
void hwm_ring_free(struct HwmRing *ring);

/**
 * Charge amplitudes for `n_min..=n_max`.
 *
 * # Safety
 * `ring` must be a live handle and `out` valid for one pointer.
 */
enum HwmStatus hwm_oam_from_ring(const struct HwmRing *ring,
                                 int32_t n_min,
                                 int32_t n_max,
                                 struct HwmOam **out);

/**
 * Interleaved `(re, im)` amplitudes from `n_min` upward; `len` counts doubles.
 *
 * # Safety
 * `oam` must be a live handle and `buf` valid for `len` doubles.
 */
enum HwmStatus hwm_oam_coeffs(const struct HwmOam *oam, double *buf, size_t len);

/**
 * `Σ|c_n|²`.
 *
 * # Safety
 * `oam` must be a live handle and `out` valid for one `double`.
 */
enum HwmStatus hwm_oam_norm(const struct HwmOam *oam, double *out);

/**
 * `Σ n|c_n|² / Σ|c_n|²`.
 *
 * # Safety
 * `oam` must be a live handle and `out` valid for one `double`.
 */
enum HwmStatus hwm_oam_mean_charge(const struct HwmOam *oam, double *out);

/**
 * # Safety
 * `oam` must come from this library and not be used afterwards.
 */
void hwm_oam_free(struct HwmOam *oam);

/**
 * Finite-difference Rayleigh quotient of `op` on the field. `f` is used by
 * [`HwmOperator::Elliptic`] only.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for one `double`.
 */
enum HwmStatus hwm_grid_mean(const struct HwmField *field,
                             enum HwmOperator op,
                             double f,
                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HWM_H */
