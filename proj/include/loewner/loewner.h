#ifndef LOEWNER_LOEWNER_H
#define LOEWNER_LOEWNER_H

/* C interface. Matrices are passed as row-major n*n double buffers. Every
   function returns an lw_status; on failure lw_last_error() describes it. */

#include <stddef.h>
#include <stdint.h>

#if defined(LW_BUILDING_LIBRARY)
#define LW_API __attribute__((visibility("default")))
#else
#define LW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lw_status {
  LW_OK = 0,
  LW_ERR_DIMENSION_MISMATCH,
  LW_ERR_NON_CONVERGENCE,
  LW_ERR_NOT_PSD,
  LW_ERR_SINGULAR,
  LW_ERR_DOMAIN,
  LW_ERR_OUT_OF_INTERVAL,
  LW_ERR_NOT_COMPARABLE,
  LW_ERR_PRECONDITION,
  LW_ERR_BAD_PARAMETER,
  LW_ERR_NOT_DIAGONAL,
  LW_ERR_NOT_AN_EFFECT,
  LW_ERR_INTERNAL_INVERSION,
  LW_ERR_NOT_AUTOMORPHISM,
  LW_ERR_INVALID_SPEC,
  LW_ERR_OUT_OF_DOMAIN,
  LW_ERR_INTERMEDIATE_SINGULAR,
  LW_ERR_NOT_ISOMORPHIC,
  LW_ERR_NULL_ARGUMENT,
  LW_ERR_BUFFER_TOO_SMALL,
  LW_ERR_INTERNAL
} lw_status;

typedef struct lw_tolerances {
  double eig_tol;
  double psd_tol;
  double rank_tol;
  double equality_tol;
} lw_tolerances;

typedef struct lw_automorphism lw_automorphism;
typedef struct lw_interval lw_interval;
typedef struct lw_chain lw_chain;

typedef enum lw_endpoint_kind {
  LW_ENDPOINT_CLOSED = 0,
  LW_ENDPOINT_OPEN = 1,
  LW_ENDPOINT_INFINITE = 2
} lw_endpoint_kind;

typedef enum lw_class {
  LW_CLASS_UNIT_INTERVAL = 0,
  LW_CLASS_POSITIVE_CLOSED,
  LW_CLASS_NEGATIVE_CLOSED,
  LW_CLASS_POSITIVE_OPEN,
  LW_CLASS_WHOLE
} lw_class;

typedef enum lw_step_kind {
  LW_STEP_TRANSLATE = 0,
  LW_STEP_CONGRUENCE,
  LW_STEP_INVERT,
  LW_STEP_NEGATE
} lw_step_kind;

LW_API const char* lw_version(void);
LW_API const char* lw_last_error(void);
LW_API const char* lw_status_name(lw_status status);
LW_API lw_tolerances lw_default_tolerances(void);
/* NULL tolerances mean defaults throughout. */

/* Order */
LW_API lw_status lw_order(size_t n, const double* a, const double* b, const lw_tolerances* tol,
                          int* le, int* lt);
/* *found = 0 when A <= B; otherwise q (length n) and t describe tQ <= A, not tQ <= B. */
LW_API lw_status lw_order_witness(size_t n, const double* a, const double* b,
                                  const lw_tolerances* tol, int* found, double* q, double* t);
LW_API lw_status lw_strength(size_t n, const double* a, const double* x, const lw_tolerances* tol,
                             double* alpha);
LW_API lw_status lw_is_effect(size_t n, const double* a, const lw_tolerances* tol, int* result);

/* Effect automorphisms */
LW_API lw_status lw_automorphism_create(size_t n, const double* t, const lw_tolerances* tol,
                                        lw_automorphism** out);
LW_API void lw_automorphism_destroy(lw_automorphism* phi);
LW_API size_t lw_automorphism_dim(const lw_automorphism* phi);
LW_API lw_status lw_automorphism_generator(const lw_automorphism* phi, double* t);
/* *has_epsilon = 0 when T^tT >= I. */
LW_API lw_status lw_automorphism_epsilon(const lw_automorphism* phi, int* has_epsilon,
                                         double* epsilon);
LW_API lw_status lw_automorphism_apply(const lw_automorphism* phi, const double* x,
                                       const lw_tolerances* tol, double* out);
LW_API lw_status lw_automorphism_compose(const lw_automorphism* s, const lw_automorphism* r,
                                         const lw_tolerances* tol, lw_automorphism** out);
LW_API lw_status lw_automorphism_inverse(const lw_automorphism* phi, const lw_tolerances* tol,
                                         lw_automorphism** out);
LW_API lw_status lw_automorphism_equals(const lw_automorphism* a, const lw_automorphism* b,
                                        const lw_tolerances* tol, int* result);

LW_API size_t lw_probe_count(size_t n);
/* probes: lw_probe_count(n) consecutive n*n matrices. */
LW_API lw_status lw_probes(size_t n, double* probes);
LW_API lw_status lw_recover_from_probes(size_t n, const double* images, const lw_tolerances* tol,
                                        lw_automorphism** out);

typedef int (*lw_effect_oracle)(void* user, size_t n, const double* x, double* out);
/* A nonzero oracle return aborts recovery with LW_ERR_BAD_PARAMETER. */
LW_API lw_status lw_recover(size_t n, lw_effect_oracle oracle, void* user,
                            const lw_tolerances* tol, lw_automorphism** out);

/* Intervals. Data for an infinite endpoint is ignored and may be NULL; an
   infinite lower endpoint is -inf, an infinite upper endpoint +inf. */
LW_API lw_status lw_interval_create(size_t n, lw_endpoint_kind lower_kind, const double* lower,
                                    lw_endpoint_kind upper_kind, const double* upper,
                                    const lw_tolerances* tol, lw_interval** out);
LW_API void lw_interval_destroy(lw_interval* spec);
LW_API lw_status lw_interval_classify(const lw_interval* spec, lw_class* out);
LW_API const char* lw_class_name(lw_class c);
LW_API lw_status lw_interval_contains(const lw_interval* spec, const double* x,
                                      const lw_tolerances* tol, int* result);

LW_API lw_status lw_chain_build(const lw_interval* spec, const lw_tolerances* tol, lw_chain** out);
LW_API void lw_chain_destroy(lw_chain* chain);
LW_API size_t lw_chain_length(const lw_chain* chain);
/* parity 1 means order-reversing. */
LW_API int lw_chain_parity(const lw_chain* chain);
/* matrix receives n*n values for Translate/Congruence and is untouched otherwise. */
LW_API lw_status lw_chain_step(const lw_chain* chain, size_t index, lw_step_kind* kind,
                               size_t* n, double* matrix);
LW_API lw_status lw_chain_apply(const lw_chain* chain, const lw_interval* domain, const double* x,
                                const lw_tolerances* tol, double* out);
LW_API lw_status lw_chain_invert(const lw_chain* chain, lw_chain** out);
LW_API lw_status lw_chain_compose(const lw_chain* outer, const lw_chain* inner, lw_chain** out);
LW_API lw_status lw_iso_between(const lw_interval* from, const lw_interval* to,
                                const lw_tolerances* tol, lw_chain** out);

/* Self-test; the callback receives one line per property. *all_passed is set. */
typedef void (*lw_line_callback)(void* user, const char* line);
LW_API lw_status lw_selftest(uint64_t seed, int trials, lw_line_callback on_line, void* user,
                             int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
