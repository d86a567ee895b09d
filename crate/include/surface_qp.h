#ifndef SURFACE_QP_H
#define SURFACE_QP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SQP_STATUS_OK = 0,
  SQP_STATUS_INVALID_SURFACE = 1,
  SQP_STATUS_INVALID_WORD = 2,
  SQP_STATUS_DEGENERATE_PATH = 3,
  SQP_STATUS_INVALID_DIAGRAM = 4,
  SQP_STATUS_NOT_GENERAL_POSITION = 5,
  SQP_STATUS_SINGULAR = 6,
  SQP_STATUS_NUMERIC_DOMAIN = 7,
  SQP_STATUS_INVALID_ARGUMENT = 8,
  SQP_STATUS_PARSE = 9,
  SQP_STATUS_NULL_POINTER = 10,
  SQP_STATUS_PANIC = 11,
  SQP_STATUS_BUFFER_TOO_SMALL = 12,
} SqpStatus;

typedef enum {
  SQP_GROUP_GL = 0,
  SQP_GROUP_U = 1,
} SqpGroup;

/**
 * Opaque point of the representation space.
 */
typedef struct SqpPoint SqpPoint;

/**
 * Opaque surface handle.
 */
typedef struct SqpSurface SqpSurface;

/**
 * Outcome of a verification suite.
 */
typedef struct {
  bool pass;
  size_t fixture_count;
  size_t failures;
  double max_residual;
} SqpSuiteSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or "" after a success.
 */
const char *sqp_last_error(void);

/**
 * Library version as a static string.
 */
const char *sqp_version(void);

/**
 * Creates the surface of the given genus with the given number of boundary components.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
SqpStatus sqp_surface_new(uint32_t genus, uint32_t boundary_count, SqpSurface **out);

/**
 * # Safety
 * `s` must come from [`sqp_surface_new`] and not be used afterwards. Null is ignored.
 */
void sqp_surface_free(SqpSurface *s);

/**
 * Number of generators of the fundamental groupoid.
 *
 * # Safety
 * Pointers must be valid.
 */
SqpStatus sqp_surface_generator_count(const SqpSurface *s, size_t *out);

/**
 * Seeded random point of Hom(Π, G^b) for GL_n(ℝ) or U(n).
 *
 * # Safety
 * Pointers must be valid.
 */
SqpStatus sqp_point_random(const SqpSurface *s,
                           SqpGroup group,
                           uint32_t n,
                           uint64_t seed,
                           SqpPoint **out);

/**
 * # Safety
 * `p` must come from [`sqp_point_random`] and not be used afterwards. Null is ignored.
 */
void sqp_point_free(SqpPoint *p);

/**
 * Holonomy of a word as row-major n×n real and imaginary parts.
 *
 * # Safety
 * `re` and `im` must each hold `len` doubles.
 */
SqpStatus sqp_point_holonomy(const SqpPoint *p, const char *w, double *re, double *im, size_t len);

/**
 * Bracket {φ∘α, ψ∘β} at a point, by the intersection formula and by the
 * bivector. Observables use the CLI syntax: `entry:i,j[:re|im]`, `trace`, `trace:k`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
SqpStatus sqp_bracket(const SqpSurface *s,
                      const SqpPoint *p,
                      const char *alpha,
                      const char *phi,
                      const char *beta,
                      const char *psi,
                      uint64_t seed,
                      double *out_formula,
                      double *out_numeric);

/**
 * Algebraic intersection number of two words as a fraction num/den.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
SqpStatus sqp_intersection(const SqpSurface *s,
                           const char *alpha,
                           const char *beta,
                           uint64_t seed,
                           int64_t *out_num,
                           int64_t *out_den);

/**
 * Runs a verification suite with its default configuration and the given seed.
 *
 * # Safety
 * Pointers must be valid; `suite` NUL-terminated.
 */
SqpStatus sqp_verify(const char *suite, uint64_t seed, SqpSuiteSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SURFACE_QP_H */
