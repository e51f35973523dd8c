#ifndef ADMLAB_H
#define ADMLAB_H

#include <stdbool.h>
#include <stddef.h>

// Result codes of every exported function.
typedef enum AdmStatus {
  ADM_STATUS_OK = 0,
  ADM_STATUS_NULL_POINTER = 1,
  ADM_STATUS_INVALID_UTF8 = 2,
  ADM_STATUS_PARSE_ERROR = 3,
  ADM_STATUS_INVALID_SPEC = 4,
  ADM_STATUS_COMPUTATION_FAILED = 5,
  ADM_STATUS_BUFFER_TOO_SMALL = 6,
  ADM_STATUS_PANIC = 7,
} AdmStatus;

// A generated manifold with its metadata.
typedef struct AdmManifold AdmManifold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *adm_version(void);

// Copies the calling thread's last error message into `buf`, NUL-terminated.
//
// `*needed` receives the buffer size required, including the terminator.
//
// # Safety
// `buf` must point to `len` writable bytes or be null with `len == 0`; `needed` may be null.
enum AdmStatus adm_last_error(char *buf, size_t len, size_t *needed);

// Builds a manifold from a family spec in JSON.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum AdmStatus adm_manifold_from_json(const char *json, struct AdmManifold **out);

// Releases a manifold; null is ignored.
//
// # Safety
// `h` must come from [`adm_manifold_from_json`] and not be used afterwards.
void adm_manifold_free(struct AdmManifold *h);

// # Safety
// `h` must be a live handle; `out` must be valid.
enum AdmStatus adm_manifold_dimension(const struct AdmManifold *h, size_t *out);

// ADM mass as the limit of Hawking masses; `+∞` is reported as `INFINITY`.
//
// # Safety
// `h` must be a live handle; `value` must be valid; `error` may be null.
enum AdmStatus adm_mass(const struct AdmManifold *h, double *value, double *error);

// Expected ADM mass from the family metadata; `NAN` when undefined.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum AdmStatus adm_expected_mass(const struct AdmManifold *h, double *out);

// Hawking mass of the symmetric sphere at arclength `s`.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum AdmStatus adm_hawking_mass(const struct AdmManifold *h, double s, double *out);

// Scalar curvature at arclength `s`.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum AdmStatus adm_scalar_curvature(const struct AdmManifold *h, double s, double *out);

// Membership in the rotationally symmetric class and the minimum scalar curvature.
//
// # Safety
// `h` must be a live handle; `in_class` and `min_curvature` must be valid.
enum AdmStatus adm_validate(const struct AdmManifold *h, bool *in_class, double *min_curvature);

// Number of interior minimal spheres.
//
// # Safety
// `h` must be a live handle; `out` must be valid.
enum AdmStatus adm_minimal_sphere_count(const struct AdmManifold *h, size_t *out);

// Runs a scenario given as JSON and returns the run result as JSON.
//
// `*passed` reports whether every probe met its expectations.
//
// # Safety
// `json` must be a NUL-terminated string; `out_json` and `passed` must be valid.
// The returned string must be released with [`adm_string_free`].
enum AdmStatus adm_run_scenario(const char *json, char **out_json, bool *passed);

// Releases a string returned by the library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void adm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADMLAB_H */
