#ifndef GYBE_H
#define GYBE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum GybeStatus {
  GYBE_STATUS_OK = 0,
  GYBE_STATUS_NULL_POINTER = 1,
  GYBE_STATUS_DIMENSION_MISMATCH = 2,
  GYBE_STATUS_NOT_SQUARE = 3,
  GYBE_STATUS_SINGULAR = 4,
  GYBE_STATUS_NO_CONVERGENCE = 5,
  GYBE_STATUS_INDEX_OUT_OF_RANGE = 6,
  GYBE_STATUS_INVALID_PARAMETER = 7,
  GYBE_STATUS_REPRESENTATION = 8,
  GYBE_STATUS_DOMAIN = 9,
  GYBE_STATUS_PARSE = 10,
  GYBE_STATUS_BUFFER_TOO_SMALL = 11,
  GYBE_STATUS_PANIC = 12,
} GybeStatus;

/**
 * Opaque braid group representation handle.
 */
typedef struct GybeBraidRep GybeBraidRep;

/**
 * Opaque solution handle.
 */
typedef struct GybeSolution GybeSolution;

/**
 * A complex number, layout-compatible with `double _Complex`.
 */
typedef struct GybeComplex {
  double re;
  double im;
} GybeComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty if none. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *gybe_last_error(void);

/**
 * Resolves a registry id such as `rowell` or `family2:theta=0.5`.
 */
enum GybeStatus gybe_solution_from_registry(const char *id, struct GybeSolution **out);

/**
 * Member of family `family` (1, 2 or 3) at angle `theta` in [0, pi].
 */
enum GybeStatus gybe_solution_family(uint8_t family, double theta, struct GybeSolution **out);

/**
 * Member of family `family` with unit-modulus parameters `alpha`, `beta`.
 */
enum GybeStatus gybe_solution_general(uint8_t family,
                                      struct GybeComplex alpha,
                                      struct GybeComplex beta,
                                      struct GybeSolution **out);

/**
 * Wraps a row-major `d^m x d^m` matrix as a candidate for signature `(d, m, l)`.
 */
enum GybeStatus gybe_solution_new(size_t d,
                                  size_t m,
                                  size_t l,
                                  const struct GybeComplex *entries,
                                  size_t len,
                                  struct GybeSolution **out);

void gybe_solution_free(struct GybeSolution *s);

/**
 * Side length of the matrix, or 0 for a null handle.
 */
size_t gybe_solution_size(const struct GybeSolution *s);

/**
 * Copies the matrix row-major into `buf`, which must hold `size * size` entries.
 */
enum GybeStatus gybe_solution_entries(const struct GybeSolution *s,
                                      struct GybeComplex *buf,
                                      size_t len);

/**
 * Largest entry of `LSL - SLS` and whether it is within `tol`.
 */
enum GybeStatus gybe_solution_check(const struct GybeSolution *s,
                                    double tol,
                                    bool *passed,
                                    double *residual);

/**
 * Far commutativity of the braid generators; vacuous signatures pass.
 */
enum GybeStatus gybe_solution_far_commutativity(const struct GybeSolution *s,
                                                double tol,
                                                bool *passed,
                                                double *residual);

enum GybeStatus gybe_solution_is_unitary(const struct GybeSolution *s, double tol, bool *unitary);

/**
 * Representation of the braid group on `n` strands; fails with
 * `Representation` if a braid relation does not hold within `tol`.
 */
enum GybeStatus gybe_braid_rep_new(const struct GybeSolution *s,
                                   size_t n,
                                   double tol,
                                   struct GybeBraidRep **out);

void gybe_braid_rep_free(struct GybeBraidRep *r);

/**
 * Dimension of the representation space, or 0 for a null handle.
 */
size_t gybe_braid_rep_dim(const struct GybeBraidRep *r);

/**
 * Image of the word `letters` (`k` for the k-th generator, `-k` for its
 * inverse), written row-major into `buf` of `dim * dim` entries.
 */
enum GybeStatus gybe_braid_rep_evaluate(const struct GybeBraidRep *r,
                                        const int64_t *letters,
                                        size_t len,
                                        struct GybeComplex *buf,
                                        size_t buf_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GYBE_H */
