#ifndef LTKIT_H
#define LTKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LtStatus {
  LT_STATUS_OK = 0,
  LT_STATUS_NULL_POINTER = 1,
  LT_STATUS_DOMAIN = 2,
  LT_STATUS_SHAPE = 3,
  LT_STATUS_PRECISION = 4,
  LT_STATUS_BUDGET = 5,
  LT_STATUS_NON_INTEGRAL = 6,
  LT_STATUS_ALGEBRA = 7,
  LT_STATUS_UTF8 = 8,
  LT_STATUS_PANIC = 9,
} LtStatus;

// Newton polygon handle.
typedef struct LtPolygon LtPolygon;

// Witt structure polynomial handle.
typedef struct LtWittPolys LtWittPolys;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the next failing call.
const char *ltkit_last_error(void);

// Release a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void ltkit_string_free(char *s);

// Polygon from `n - 1` valuations `nums[k]/dens[k]`; a zero denominator means infinity.
//
// # Safety
// `nums` and `dens` must point to `len` readable values; `out` must be writable.
enum LtStatus ltkit_polygon_new(uintptr_t n,
                                uint64_t q,
                                const int64_t *nums,
                                const int64_t *dens,
                                uintptr_t len,
                                struct LtPolygon **out);

// Polygon from a comma separated list such as `1/2,inf`.
//
// # Safety
// `vals` must be a NUL-terminated string; `out` must be writable.
enum LtStatus ltkit_polygon_parse(uintptr_t n,
                                  uint64_t q,
                                  const char *vals,
                                  struct LtPolygon **out);

// # Safety
// `p` must come from this library and not be freed twice.
void ltkit_polygon_free(struct LtPolygon *p);

// Slope `lambda_j`, `1 <= j <= n`.
//
// # Safety
// `p` must be a live handle; `num` and `den` must be writable.
enum LtStatus ltkit_polygon_slope(const struct LtPolygon *p,
                                  uintptr_t j,
                                  int64_t *num,
                                  int64_t *den);

// 1 if the polygon lies in the Gross-Hopkins domain, 0 if not, -1 on a null handle.
//
// # Safety
// `p` must be null or a live handle.
int32_t ltkit_polygon_in_domain(const struct LtPolygon *p);

// JSON rendering; release with `ltkit_string_free`.
//
// # Safety
// `p` must be null or a live handle.
char *ltkit_polygon_json(const struct LtPolygon *p);

// Image polygon under the canonical quotient of rank `q^i`.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum LtStatus ltkit_hecke_quotient(const struct LtPolygon *p, uintptr_t i, struct LtPolygon **out);

// Greedy reduction into the domain; writes the final polygon and the step count.
//
// # Safety
// `p` must be a live handle; `out` and `steps` must be writable.
enum LtStatus ltkit_hecke_reduce(const struct LtPolygon *p,
                                 uintptr_t budget,
                                 struct LtPolygon **out,
                                 uintptr_t *steps);

// Witt structure polynomials of length `len` for residue size `q`.
//
// # Safety
// `out` must be writable.
enum LtStatus ltkit_witt_new(uint64_t q, uintptr_t len, struct LtWittPolys **out);

// # Safety
// `w` must come from this library and not be freed twice.
void ltkit_witt_free(struct LtWittPolys *w);

// Newline separated `S_i`, `P_i`, `F_i`; release with `ltkit_string_free`.
//
// # Safety
// `w` must be null or a live handle.
char *ltkit_witt_render(const struct LtWittPolys *w);

// Run the command-line front end on `argc` arguments (excluding the program name);
// stdout goes to `*out` (release with `ltkit_string_free`). Returns the exit status.
//
// # Safety
// `argv` must hold `argc` NUL-terminated strings; `out` must be null or writable.
int32_t ltkit_cli(uintptr_t argc, const char *const *argv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LTKIT_H */
