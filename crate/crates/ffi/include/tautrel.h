#ifndef TAUTREL_H
#define TAUTREL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum TautrelStatus {
  TAUTREL_STATUS_OK = 0,
  TAUTREL_STATUS_DOMAIN = 1,
  TAUTREL_STATUS_OUT_OF_RANGE = 2,
  TAUTREL_STATUS_DIVISIBILITY = 3,
  TAUTREL_STATUS_SPECIALIZATION = 4,
  TAUTREL_STATUS_NOT_A_RELATION = 5,
  TAUTREL_STATUS_NOT_IN_P = 6,
  TAUTREL_STATUS_DEGENERATE = 7,
  TAUTREL_STATUS_UNSTABLE = 8,
  TAUTREL_STATUS_PARSE = 9,
  TAUTREL_STATUS_NULL_POINTER = 10,
  TAUTREL_STATUS_INVALID_UTF8 = 11,
  TAUTREL_STATUS_PANIC = 12,
} TautrelStatus;

/**
 * A linear combination of decorated strata.
 */
typedef struct TautrelElement TautrelElement;

/**
 * A polynomial in kappa classes.
 */
typedef struct TautrelRelation TautrelRelation;

/**
 * A truncated power series with exact rational coefficients.
 */
typedef struct TautrelSeries TautrelSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *tautrel_last_error(void);

/**
 * Forgets the last error message.
 */
void tautrel_clear_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void tautrel_string_free(char *s);

/**
 * Builds a named series (`A`, `B`, `calA`, `calB`, `H0`, `H1`, `D`, `Stirling`) through `order`.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum TautrelStatus tautrel_series_new(const char *name, size_t order, struct TautrelSeries **out);

/**
 * `Phi(z, q)` in `q` through `order` at rational `lambda` and `z` given as `"p/q"` strings.
 *
 * # Safety
 * `lambda` and `z` must be nul-terminated strings; `out` must be writable.
 */
enum TautrelStatus tautrel_series_phi(size_t order,
                                      const char *lambda,
                                      const char *z,
                                      struct TautrelSeries **out);

/**
 * Truncation order of a series.
 *
 * # Safety
 * `s` must be a live series handle; `out` must be writable.
 */
enum TautrelStatus tautrel_series_order(const struct TautrelSeries *s, size_t *out);

/**
 * Coefficient `k` as a `"p/q"` string.
 *
 * # Safety
 * `s` must be a live series handle; `out` must be writable.
 */
enum TautrelStatus tautrel_series_coeff(const struct TautrelSeries *s, size_t k, char **out);

/**
 * Releases a series.
 *
 * # Safety
 * `s` must be null or a series handle not yet freed.
 */
void tautrel_series_free(struct TautrelSeries *s);

/**
 * The bracket `<tau_k1 ... tau_kn>` as a `"p/q"` string; zero when no genus fits.
 *
 * # Safety
 * `ks` must point to `n` readable values; `out` must be writable.
 */
enum TautrelStatus tautrel_bracket(const uint32_t *ks, size_t n, char **out);

/**
 * The Faber-Zagier relation for `(g, r, sigma)`, with `sigma` written `"1,3,3"` or `""`.
 *
 * # Safety
 * `sigma` must be a nul-terminated string; `out` must be writable.
 */
enum TautrelStatus tautrel_fz_relation(uint32_t g,
                                       uint32_t r,
                                       const char *sigma,
                                       struct TautrelRelation **out);

/**
 * Human-readable form, e.g. `1800*k1^2 - 25920*k2`.
 *
 * # Safety
 * `rel` must be a live relation handle; `out` must be writable.
 */
enum TautrelStatus tautrel_relation_to_string(const struct TautrelRelation *rel, char **out);

/**
 * JSON list of `{"kappa": [...], "coeff": "p/q"}` terms.
 *
 * # Safety
 * `rel` must be a live relation handle; `out` must be writable.
 */
enum TautrelStatus tautrel_relation_to_json(const struct TautrelRelation *rel, char **out);

/**
 * Releases a relation.
 *
 * # Safety
 * `rel` must be null or a relation handle not yet freed.
 */
void tautrel_relation_free(struct TautrelRelation *rel);

/**
 * Pixton's relation `R^d_{g,A}` with `A` given as `n` entries in `{0, 1}`.
 *
 * # Safety
 * `a` must point to `n` readable bytes; `out` must be writable.
 */
enum TautrelStatus tautrel_pixton_class(uint32_t g,
                                        const uint8_t *a,
                                        size_t n,
                                        uint32_t d,
                                        struct TautrelElement **out);

/**
 * Number of terms of an element.
 *
 * # Safety
 * `el` must be a live element handle; `out` must be writable.
 */
enum TautrelStatus tautrel_element_num_terms(const struct TautrelElement *el, size_t *out);

/**
 * JSON list of terms `{"graph", "kappa", "psi", "coeff"}`.
 *
 * # Safety
 * `el` must be a live element handle; `out` must be writable.
 */
enum TautrelStatus tautrel_element_to_json(const struct TautrelElement *el, char **out);

/**
 * Integral of the element times `psi_1^{psi[0]} ... kappa_1^{kappa[0]} kappa_2^{kappa[1]} ...`.
 *
 * # Safety
 * `el` must be a live element handle, `psi` and `kappa` must point to
 * `n_psi` and `n_kappa` readable values, and `out` must be writable.
 */
enum TautrelStatus tautrel_element_integrate(const struct TautrelElement *el,
                                             const uint32_t *psi,
                                             size_t n_psi,
                                             const uint32_t *kappa,
                                             size_t n_kappa,
                                             char **out);

/**
 * Releases an element.
 *
 * # Safety
 * `el` must be null or an element handle not yet freed.
 */
void tautrel_element_free(struct TautrelElement *el);

/**
 * Number of stable graphs of type `(g, n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum TautrelStatus tautrel_stable_graph_count(uint32_t g, size_t n, size_t *out);

/**
 * Runs a verification suite (`series`, `strata`, `pixton-pairings`, ...) and
 * writes the JSON report. `passed` receives whether every check held.
 *
 * # Safety
 * `suite` must be a nul-terminated string; `out` and `passed` must be writable.
 */
enum TautrelStatus tautrel_verify(const char *suite, uint64_t seed, char **out, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAUTREL_H */
