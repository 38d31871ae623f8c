#ifndef SRICCI_H
#define SRICCI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SricciStatus {
  SRICCI_STATUS_OK = 0,
  SRICCI_STATUS_NULL_POINTER = 1,
  SRICCI_STATUS_INVALID_UTF8 = 2,
  SRICCI_STATUS_BUFFER_TOO_SMALL = 3,
  SRICCI_STATUS_PANIC = 4,
  // Unparseable document, bad weights, unknown generator or parameters.
  SRICCI_STATUS_INVALID_INPUT = 10,
  SRICCI_STATUS_NOT_PURE = 11,
  SRICCI_STATUS_NOT_ORIENTABLE = 12,
  SRICCI_STATUS_NOT_REGULAR = 13,
  SRICCI_STATUS_DIMENSION_OUT_OF_RANGE = 14,
  SRICCI_STATUS_FACE_NOT_IN_COMPLEX = 15,
  SRICCI_STATUS_NOT_ADJACENT = 16,
  SRICCI_STATUS_DISCONNECTED = 17,
  // A theorem's hypothesis does not hold for this complex.
  SRICCI_STATUS_HYPOTHESIS_UNMET = 18,
  SRICCI_STATUS_NUMERICAL = 19,
} SricciStatus;

typedef enum SricciWeights {
  SRICCI_WEIGHTS_DELTA = 0,
  SRICCI_WEIGHTS_UNIT = 1,
} SricciWeights;

// Opaque handle to a parsed complex.
typedef struct SricciComplex SricciComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a JSON complex document. On success `*out` owns a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SricciStatus sricci_complex_from_json(const char *json, struct SricciComplex **out);

// Builds a fixture complex such as `torus_grid` with params `{3, 3}`.
//
// # Safety
// `name` must be NUL-terminated, `params` must point to `n_params` values
// (or be null when `n_params` is 0), and `out` must be valid.
enum SricciStatus sricci_complex_generate(const char *name,
                                          const uint64_t *params,
                                          size_t n_params,
                                          struct SricciComplex **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `h` must come from this library and not be used afterwards.
void sricci_complex_free(struct SricciComplex *h);

// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum SricciStatus sricci_complex_dim(const struct SricciComplex *h, size_t *out);

// Number of faces of dimension `d`.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum SricciStatus sricci_complex_face_count(const struct SricciComplex *h, size_t d, size_t *out);

// Curvature between faces `a` and `b` of dimension `d`, indexed in
// lexicographic order of their vertex ids.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum SricciStatus sricci_ricci(const struct SricciComplex *h,
                               enum SricciWeights weights,
                               size_t d,
                               size_t a,
                               size_t b,
                               double *out);

// Ascending eigenvalues of the down Laplacian on `d`-faces. `*len` receives
// the number of eigenvalues; if it exceeds `cap`, nothing is written and
// `BufferTooSmall` is returned.
//
// # Safety
// `buf` must hold `cap` doubles (may be null when `cap` is 0) and `len` must
// be valid.
enum SricciStatus sricci_down_spectrum(const struct SricciComplex *h,
                                       enum SricciWeights weights,
                                       size_t d,
                                       double *buf,
                                       size_t cap,
                                       size_t *len);

// Runs `command` (`summary`, `spectrum`, `curvature`, `verify`, `dual`) with
// default options and returns the machine-readable JSON report.
//
// # Safety
// `command` must be NUL-terminated and `out` valid. Free `*out` with
// [`sricci_string_free`].
enum SricciStatus sricci_report_json(const struct SricciComplex *h,
                                     const char *command,
                                     enum SricciWeights weights,
                                     char **out);

// # Safety
// `s` must come from this library or be null.
void sricci_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next library call on the same thread.
const char *sricci_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SRICCI_H */
