#ifndef SYMCONE_H
#define SYMCONE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SymconeAlgebraKind {
  SYMCONE_ALGEBRA_KIND_ORTHANT = 0,
  SYMCONE_ALGEBRA_KIND_SYM_MATRIX = 1,
  SYMCONE_ALGEBRA_KIND_SPIN_FACTOR = 2,
} SymconeAlgebraKind;

typedef enum SymconeStatus {
  SYMCONE_STATUS_OK = 0,
  SYMCONE_STATUS_NULL_POINTER = 1,
  /**
   * Malformed coordinates, generator, configuration or mismatched algebras.
   */
  SYMCONE_STATUS_INVALID_ARGUMENT = 2,
  SYMCONE_STATUS_NOT_IN_CONE = 3,
  SYMCONE_STATUS_NON_CONVERGENCE = 4,
  /**
   * The solver needs `|p| > 1`.
   */
  SYMCONE_STATUS_EXPONENT_OUT_OF_RANGE = 5,
  SYMCONE_STATUS_EIGENSOLVER_FAILURE = 6,
  SYMCONE_STATUS_PANIC = 7,
} SymconeStatus;

/**
 * An element of one of the algebras.
 */
typedef struct SymconeElement SymconeElement;

typedef struct SymconeSolveReport SymconeSolveReport;

/**
 * A product of cone automorphisms, applied in push order.
 */
typedef struct SymconeWord SymconeWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *symcone_last_error(void);

/**
 * Number of coordinates of an element: `n`, `r*r` (row-major) or `n`.
 */
size_t symcone_coord_len(enum SymconeAlgebraKind kind, size_t param);

/**
 * # Safety
 * `coords` must point to `len` readable doubles; `out` must be writable.
 */
enum SymconeStatus symcone_element_new(enum SymconeAlgebraKind kind,
                                       size_t param,
                                       const double *coords,
                                       size_t len,
                                       struct SymconeElement **out);

/**
 * # Safety
 * `x` must be NULL or a handle from this library that was not yet freed.
 */
void symcone_element_free(struct SymconeElement *x);

/**
 * # Safety
 * `x` must be a live handle.
 */
size_t symcone_element_len(const struct SymconeElement *x);

/**
 * Copies the coordinates into `buf`, which must hold `symcone_element_len` doubles.
 *
 * # Safety
 * `x` must be a live handle and `buf` must have room for `len` doubles.
 */
enum SymconeStatus symcone_element_coords(const struct SymconeElement *x, double *buf, size_t len);

/**
 * Hilbert distance `d(x, y)`.
 *
 * # Safety
 * `x`, `y` must be live handles; `out` must be writable.
 */
enum SymconeStatus symcone_distance(const struct SymconeElement *x,
                                    const struct SymconeElement *y,
                                    double *out);

/**
 * `lambda_max = inf{l : l y - x in the cone}` and `lambda_min = sup{l : x - l y in the cone}`.
 *
 * # Safety
 * `x`, `y` must be live handles; the out-pointers must be writable.
 */
enum SymconeStatus symcone_lambda_extremes(const struct SymconeElement *x,
                                           const struct SymconeElement *y,
                                           double *lambda_max,
                                           double *lambda_min);

/**
 * Spectral power `x^p`.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum SymconeStatus symcone_power(const struct SymconeElement *x,
                                 double p,
                                 struct SymconeElement **out);

/**
 * An empty word (the identity map).
 *
 * # Safety
 * `out` must be writable.
 */
enum SymconeStatus symcone_word_new(enum SymconeAlgebraKind kind,
                                    size_t param,
                                    struct SymconeWord **out);

/**
 * # Safety
 * `w` must be NULL or a live handle.
 */
void symcone_word_free(struct SymconeWord *w);

/**
 * Appends `x -> mu x`, `mu > 0`.
 *
 * # Safety
 * `w` must be a live handle.
 */
enum SymconeStatus symcone_word_push_scalar(struct SymconeWord *w, double mu);

/**
 * Appends the quadratic representation `x -> P(a) x`, `a` in the cone.
 *
 * # Safety
 * `w` and `a` must be live handles.
 */
enum SymconeStatus symcone_word_push_quad(struct SymconeWord *w, const struct SymconeElement *a);

/**
 * Appends `X -> T^T X T` for an invertible row-major `side x side` matrix.
 *
 * # Safety
 * `w` must be a live handle; `t` must point to `side * side` doubles.
 */
enum SymconeStatus symcone_word_push_congruence(struct SymconeWord *w,
                                                const double *t,
                                                size_t side);

/**
 * Appends the coordinate permutation `y_i = x_{sigma_i}` (orthant only).
 *
 * # Safety
 * `w` must be a live handle; `sigma` must point to `len` indices.
 */
enum SymconeStatus symcone_word_push_permutation(struct SymconeWord *w,
                                                 const size_t *sigma,
                                                 size_t len);

/**
 * # Safety
 * `w`, `x` must be live handles; `out` must be writable.
 */
enum SymconeStatus symcone_word_apply(const struct SymconeWord *w,
                                      const struct SymconeElement *x,
                                      struct SymconeElement **out);

/**
 * Solves `g(a) = a^p`, or `g(a^p) = a` when `corollary` is true.
 *
 * `initial` may be NULL (start at the identity). On
 * [`SymconeStatus::NonConvergence`] a report is still written to `out`.
 *
 * # Safety
 * `g` must be a live handle, `initial` NULL or a live handle, `out` writable.
 */
enum SymconeStatus symcone_solve(const struct SymconeWord *g,
                                 double p,
                                 double tol,
                                 size_t max_iter,
                                 const struct SymconeElement *initial,
                                 bool corollary,
                                 struct SymconeSolveReport **out);

/**
 * Solves `T^T A T = A^(2^k)` for SPD `A`; `t` is row-major `side x side`.
 *
 * # Safety
 * `t` must point to `side * side` doubles; `out` must be writable.
 */
enum SymconeStatus symcone_bushell(const double *t,
                                   size_t side,
                                   uint32_t k,
                                   double tol,
                                   size_t max_iter,
                                   struct SymconeSolveReport **out);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
void symcone_report_free(struct SymconeSolveReport *r);

/**
 * A new element handle holding the solution.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum SymconeStatus symcone_report_solution(const struct SymconeSolveReport *r,
                                           struct SymconeElement **out);

/**
 * # Safety
 * `r` must be a live handle.
 */
size_t symcone_report_iterations(const struct SymconeSolveReport *r);

/**
 * # Safety
 * `r` must be a live handle.
 */
double symcone_report_residual(const struct SymconeSolveReport *r);

/**
 * # Safety
 * `r` must be a live handle.
 */
double symcone_report_contraction_estimate(const struct SymconeSolveReport *r);

/**
 * # Safety
 * `r` must be a live handle.
 */
bool symcone_report_converged(const struct SymconeSolveReport *r);

/**
 * # Safety
 * `r` must be a live handle.
 */
size_t symcone_report_trace_len(const struct SymconeSolveReport *r);

/**
 * Copies `d(x_k, x_{k+1})` for each step into `buf`.
 *
 * # Safety
 * `r` must be a live handle and `buf` must have room for `len` doubles.
 */
enum SymconeStatus symcone_report_trace(const struct SymconeSolveReport *r,
                                        double *buf,
                                        size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMCONE_H */
