#ifndef ADSEARCH_H
#define ADSEARCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code for every fallible call in this interface.
typedef enum AdsStatus {
  // Success.
  ADS_OK = 0,
  // A required pointer argument was null.
  ADS_NULL_POINTER = 1,
  // Arguments were rejected before any computation started.
  ADS_INVALID_ARGUMENT = 2,
  // The computation ran but failed to converge or left its domain.
  ADS_NUMERICAL_FAILURE = 3,
  // A panic was caught at the boundary; the handle state is unspecified.
  ADS_INTERNAL_PANIC = 4,
} AdsStatus;

// Opaque interpolation-path handle.
typedef struct AdsPath AdsPath;

// Spectral data of the two-level block at a fixed schedule parameter.
typedef struct AdsSpectrum {
  double e_minus;
  double e_plus;
  // Gap between the two coupled levels.
  double omega;
  // Energy of the (N-2)-fold degenerate block.
  double degenerate_level;
  // Off-diagonal matrix element of dH/ds between the coupled levels.
  double coupling;
} AdsSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or null if the
// last call succeeded. The pointer stays valid until the next failing call
// on the same thread.
const char *ads_last_error(void);

// Create the linear path f = 1-s, g = s over an N-item search space.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum AdsStatus ads_path_linear(size_t n, struct AdsPath **out);

// Create the one-parameter quadratic path f = 1-s+As(1-s), g = s+As(1-s).
//
// # Safety
// `out` must point to writable storage for one pointer.
enum AdsStatus ads_path_quadratic(size_t n, double a, struct AdsPath **out);

// Release a path handle. Null is a no-op.
//
// # Safety
// `path` must have been returned by a path constructor and not freed yet.
void ads_path_free(struct AdsPath *path);

// Evaluate the interpolation functions and their derivatives at s ∈ [0, 1].
// Any of the four output pointers may be null to skip that value.
//
// # Safety
// `path` must be a live handle; non-null outputs must be writable.
enum AdsStatus ads_path_eval(const struct AdsPath *path,
                             double s,
                             double *f,
                             double *g,
                             double *df,
                             double *dg);

// Spectral decomposition of the two-level block at s ∈ [0, 1].
//
// # Safety
// `path` must be a live handle and `out` writable.
enum AdsStatus ads_path_spectrum(const struct AdsPath *path, double s, struct AdsSpectrum *out);

// Minimum run time of the locally adiabatic schedule at adiabaticity
// parameter `epsilon` ∈ (0, 1).
//
// # Safety
// `path` must be a live handle and `out` writable.
enum AdsStatus ads_t_min(const struct AdsPath *path, double epsilon, double *out);

// Run the two-level dynamics under the locally adiabatic schedule and write
// the final ground-state fidelity |⟨E₋(1)|ψ(T)⟩|².
//
// # Safety
// `path` must be a live handle and `out` writable.
enum AdsStatus ads_evolve_fidelity(const struct AdsPath *path, double epsilon, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADSEARCH_H */
