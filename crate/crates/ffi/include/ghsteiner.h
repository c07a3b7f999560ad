#ifndef GHSTEINER_H
#define GHSTEINER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. `INVALID_INPUT` and `COMPUTATION` match the CLI exit codes.
typedef enum GhsStatus {
  GHS_STATUS_OK = 0,
  GHS_STATUS_NULL_POINTER = 1,
  GHS_STATUS_INVALID_INPUT = 2,
  GHS_STATUS_COMPUTATION = 3,
  GHS_STATUS_PANIC = 4,
} GhsStatus;

// Opaque finite metric space.
typedef struct GhsSpace GhsSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *ghs_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ghs_version(void);

// Builds a space from a row-major `n * n` matrix. `name` may be NULL.
//
// # Safety
// `matrix` must point to `n * n` doubles, `name` must be NULL or a
// NUL-terminated string, and `out` must be writable.
enum GhsStatus ghs_space_new(const char *name,
                             const double *matrix,
                             size_t n,
                             struct GhsSpace **out);

// # Safety
// `space` must be NULL or a handle from `ghs_space_new` not yet freed.
void ghs_space_free(struct GhsSpace *space);

// Number of points, or 0 for NULL.
//
// # Safety
// `space` must be NULL or a live handle.
size_t ghs_space_len(const struct GhsSpace *space);

// # Safety
// `space` must be a live handle and `out` writable.
enum GhsStatus ghs_space_diameter(const struct GhsSpace *space, double *out);

// Exact Gromov-Hausdorff distance between two spaces.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum GhsStatus ghs_gh_distance(const struct GhsSpace *a, const struct GhsSpace *b, double *out);

// Solves a boundary set given as JSON (`{"spaces": [...]}`). `config_json`
// may be NULL for defaults, or a JSON object with any of `restarts`,
// `seed`, `tol`, `max_iters`, `max_steiner_size`, `topology_mode`.
// On success `*out_json` receives the solution document, to be released
// with `ghs_string_free`.
//
// # Safety
// String arguments must be NULL-terminated (or NULL where allowed) and
// `out_json` writable.
enum GhsStatus ghs_solve_json(const char *input_json, const char *config_json, char **out_json);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void ghs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GHSTEINER_H */
