/* harmqc C ABI. Build the crate and link harmqc_ffi (staticlib or cdylib). */

#ifndef HARMQC_H
#define HARMQC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible ABI call.
 */
typedef enum {
  HQC_STATUS_OK = 0,
  HQC_STATUS_NULL_ARGUMENT,
  HQC_STATUS_INVALID_ARGUMENT,
  HQC_STATUS_OUT_OF_DOMAIN,
  HQC_STATUS_NON_POSITIVE_JACOBIAN,
  HQC_STATUS_DILATATION_BOUND,
  HQC_STATUS_DEGENERATE_DERIVATIVE,
  HQC_STATUS_SERIES_DIVERGENCE,
  HQC_STATUS_NOT_JORDAN,
  HQC_STATUS_NOT_COVERED,
  HQC_STATUS_UNSUPPORTED,
  HQC_STATUS_IO_ERROR,
} HqcStatus;

/**
 * Opaque harmonic-map handle.
 */
typedef struct HqcMap HqcMap;

/**
 * One Laurent coefficient: `(re + i im) z^exponent`.
 */
typedef struct {
  int32_t exponent;
  double re;
  double im;
} HqcCoeff;

/**
 * Schwarzian-norm estimate.
 */
typedef struct {
  double value;
  double argmax_re;
  double argmax_im;
  uint64_t samples;
  uint32_t refinement_depth;
  /**
   * 1 when the running max was still growing toward the boundary.
   */
  uint8_t boundary_increasing;
} HqcNormEstimate;

/**
 * Quasicircle certificate for one traced boundary circle.
 */
typedef struct {
  uint8_t jordan;
  double turning_constant;
  double turning_constant_refined;
  uint64_t samples_coarse;
  uint64_t samples_fine;
  uint8_t stable;
} HqcCurveCertificate;

/**
 * Injectivity scan result; the witness fields are valid when `injective` is 0.
 */
typedef struct {
  uint8_t injective;
  uint64_t samples;
  double z1_re;
  double z1_im;
  double z2_re;
  double z2_im;
  double image_distance;
  double domain_distance;
} HqcInjectivityReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a harmonic map `h + conj(g)` on the disk `|z - (cx + i cy)| < radius`.
 * Coefficients get the default whole-plane validity annulus.
 *
 * # Safety
 * `h`/`g` must point to `h_len`/`g_len` readable elements (or be null with
 * length zero); `out` must be a valid destination for one pointer.
 */
HqcStatus hqc_map_new_disk(const HqcCoeff *h,
                           uintptr_t h_len,
                           const HqcCoeff *g,
                           uintptr_t g_len,
                           double center_re,
                           double center_im,
                           double radius,
                           HqcMap **out);

/**
 * Creates a harmonic map on the annulus `1 < |z| < outer_radius`.
 *
 * # Safety
 * Same contract as [`hqc_map_new_disk`].
 */
HqcStatus hqc_map_new_annulus(const HqcCoeff *h,
                              uintptr_t h_len,
                              const HqcCoeff *g,
                              uintptr_t g_len,
                              double outer_radius,
                              HqcMap **out);

/**
 * Releases a map handle. Null is a no-op.
 *
 * # Safety
 * `map` must have been returned by a constructor and not freed before.
 */
void hqc_map_free(HqcMap *map);

/**
 * Jacobian `|h'|^2 - |g'|^2` at `z = re + i im`.
 *
 * # Safety
 * `map` must be a live handle; `out` a valid destination.
 */
HqcStatus hqc_jacobian(const HqcMap *map, double re, double im, double *out);

/**
 * Second dilatation `g'/h'` at `z`.
 *
 * # Safety
 * `map` must be a live handle; `out_re`, `out_im` valid destinations.
 */
HqcStatus hqc_dilatation(const HqcMap *map, double re, double im, double *out_re, double *out_im);

/**
 * Harmonic Schwarzian derivative at `z`.
 *
 * # Safety
 * `map` must be a live handle; `out_re`, `out_im` valid destinations.
 */
HqcStatus hqc_schwarzian(const HqcMap *map, double re, double im, double *out_re, double *out_im);

/**
 * Adaptive estimate of `sup lambda^-2 |S_f|` over the map's domain.
 * Pass `grid = 0`, `refinements = 0` or `rel_tol <= 0` for the defaults
 * (64, 6, 1e-3).
 *
 * # Safety
 * `map` must be a live handle; `out` a valid destination.
 */
HqcStatus hqc_schwarzian_norm(const HqcMap *map,
                              uint32_t grid,
                              uint32_t refinements,
                              double rel_tol,
                              HqcNormEstimate *out);

/**
 * Traces boundary circle `circle_index` (outer first) at `samples` and
 * `2 * samples` vertices and certifies the image curve.
 *
 * # Safety
 * `map` must be a live handle; `out` a valid destination.
 */
HqcStatus hqc_quasicircle_report(const HqcMap *map,
                                 uint32_t circle_index,
                                 uint32_t samples,
                                 HqcCurveCertificate *out);

/**
 * Spatial-hash injectivity scan on an `n x n` domain grid.
 *
 * # Safety
 * `map` must be a live handle; `out` a valid destination.
 */
HqcStatus hqc_grid_injectivity(const HqcMap *map, uint32_t grid, HqcInjectivityReport *out);

/**
 * Hyperbolic density of the disk `|z - c| < radius` at `z`.
 *
 * # Safety
 * `out` must be a valid destination.
 */
HqcStatus hqc_density_disk(double z_re,
                           double z_im,
                           double center_re,
                           double center_im,
                           double radius,
                           double *out);

/**
 * Hyperbolic density of the annulus `1 < |z| < outer_radius` at `z`.
 *
 * # Safety
 * `out` must be a valid destination.
 */
HqcStatus hqc_density_annulus(double z_re, double z_im, double outer_radius, double *out);

/**
 * Universal covering of the annulus: `z = pi(w)` and `dz = pi'(w)`.
 *
 * # Safety
 * All out-pointers must be valid destinations.
 */
HqcStatus hqc_covering_pullback(double w_re,
                                double w_im,
                                double outer_radius,
                                double *out_z_re,
                                double *out_z_im,
                                double *out_dz_re,
                                double *out_dz_im);

/**
 * Static description of a status code.
 */
const char *hqc_status_message(HqcStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMQC_H */
