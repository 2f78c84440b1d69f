#ifndef GQ_H
#define GQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum GqStatus {
  GQ_STATUS_OK = 0,
  GQ_STATUS_NULL_POINTER = 1,
  GQ_STATUS_INVALID_UTF8 = 2,
  GQ_STATUS_PARSE_ERROR = 3,
  GQ_STATUS_SEMANTIC_ERROR = 4,
  GQ_STATUS_ALGEBRA_MISMATCH = 5,
  GQ_STATUS_DEGREE_MISMATCH = 6,
  GQ_STATUS_INVALID_ARGUMENT = 7,
  GQ_STATUS_KERNEL_ERROR = 8,
  GQ_STATUS_PANIC = 9,
} GqStatus;

/*
 Free graded-commutative algebra.
 */
typedef struct GqAlgebra GqAlgebra;

/*
 Homogeneous derivation of a [`GqAlgebra`].
 */
typedef struct GqDerivation GqDerivation;

/*
 Polynomial in a [`GqAlgebra`].
 */
typedef struct GqPolynomial GqPolynomial;

/*
 Message for the most recent failure on this thread, or NULL. The pointer
 stays valid until the next gq call on the same thread.
 */
const char *gq_last_error_message(void);

/*
 # Safety
 `s` must come from this library, or be NULL.
 */
void gq_string_free(char *s);

/*
 Algebra on `n` generators with the given names and degrees.

 # Safety
 `names` and `degrees` must point to `n` valid entries; `out` must be writable.
 */
enum GqStatus gq_algebra_new(const char *const *names,
                             const int64_t *degrees,
                             size_t n,
                             struct GqAlgebra **out);

/*
 # Safety
 `alg` must come from [`gq_algebra_new`], or be NULL.
 */
void gq_algebra_free(struct GqAlgebra *alg);

/*
 Number of generators, or 0 for NULL.

 # Safety
 `alg` must be a live handle or NULL.
 */
size_t gq_algebra_len(const struct GqAlgebra *alg);

/*
 Parses `src`, e.g. `"1/2*x^2*d:x - y"`, in `alg`.

 # Safety
 Pointers must be valid; `src` NUL-terminated.
 */
enum GqStatus gq_poly_parse(const struct GqAlgebra *alg,
                            const char *src,
                            struct GqPolynomial **out);

/*
 # Safety
 `p` must come from this library, or be NULL.
 */
void gq_poly_free(struct GqPolynomial *p);

/*
 # Safety
 `a`, `b` live handles over the same algebra; `out` writable.
 */
enum GqStatus gq_poly_add(const struct GqPolynomial *a,
                          const struct GqPolynomial *b,
                          struct GqPolynomial **out);

/*
 # Safety
 `a`, `b` live handles over the same algebra; `out` writable.
 */
enum GqStatus gq_poly_sub(const struct GqPolynomial *a,
                          const struct GqPolynomial *b,
                          struct GqPolynomial **out);

/*
 Graded-commutative product `a*b`.

 # Safety
 `a`, `b` live handles over the same algebra; `out` writable.
 */
enum GqStatus gq_poly_mul(const struct GqPolynomial *a,
                          const struct GqPolynomial *b,
                          struct GqPolynomial **out);

/*
 # Safety
 `p` must be a live handle or NULL.
 */
bool gq_poly_is_zero(const struct GqPolynomial *p);

/*
 Canonical text of `p`; free with [`gq_string_free`].

 # Safety
 `p` live handle; `out` writable.
 */
enum GqStatus gq_poly_to_string(const struct GqPolynomial *p, char **out);

/*
 Derivation of `degree` sending generator `i` to `images[i]`, parsed in `alg`.

 # Safety
 `images` must hold one string per generator of `alg`; `out` writable.
 */
enum GqStatus gq_derivation_new(const struct GqAlgebra *alg,
                                int32_t degree,
                                const char *const *images,
                                size_t n,
                                struct GqDerivation **out);

/*
 # Safety
 `d` must come from this library, or be NULL.
 */
void gq_derivation_free(struct GqDerivation *d);

/*
 # Safety
 `d`, `p` live handles; `out` writable.
 */
enum GqStatus gq_derivation_apply(const struct GqDerivation *d,
                                  const struct GqPolynomial *p,
                                  struct GqPolynomial **out);

/*
 Checks `Q² = 0` generator by generator. `*passed` receives the verdict.
 On failure `*witness`, if non-NULL, receives "witness: residual".

 # Safety
 `d` live handle; `passed` writable; `witness` writable or NULL.
 */
enum GqStatus gq_derivation_check_nilpotent(const struct GqDerivation *d,
                                            bool *passed,
                                            char **witness);

/*
 Runs a script. `*exit_code` gets the CLI exit code (0 pass, 1 fail,
 2 parse error, 3 semantic or runtime error) and `*report` the text or
 JSON report. Parse and semantic errors also return a non-OK status.

 # Safety
 `src` NUL-terminated; `base_dir` NUL-terminated or NULL; outputs writable.
 */
enum GqStatus gq_run_script(const char *src,
                            const char *base_dir,
                            bool json,
                            int32_t *exit_code,
                            char **report);

#endif  /* GQ_H */
