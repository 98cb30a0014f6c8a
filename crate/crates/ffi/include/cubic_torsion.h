#ifndef CUBIC_TORSION_H
#define CUBIC_TORSION_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Discriminant sign selector.
 */
typedef enum CtSign {
  CT_SIGN_NEGATIVE = 0,
  CT_SIGN_POSITIVE = 1,
} CtSign;

/**
 * Status codes.
 */
typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_POINTER = 1,
  CT_STATUS_INVALID_ARGUMENT = 2,
  CT_STATUS_BOUND_EXCEEDED = 3,
  CT_STATUS_DEGENERATE = 4,
  CT_STATUS_OVERFLOW = 5,
  CT_STATUS_INTERNAL = 6,
  CT_STATUS_IO = 7,
  CT_STATUS_PANIC = 8,
} CtStatus;

/**
 * The canonical class representatives of one discriminant.
 */
typedef struct CtClassList CtClassList;

/**
 * A family of quadratic orders given by local conditions.
 */
typedef struct CtFamily CtFamily;

/**
 * An integer-matrix binary cubic form ax³ + 3bx²y + 3cxy² + dy³.
 */
typedef struct CtForm CtForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ct_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ct_version(void);

/**
 * Creates a form handle.
 */
enum CtStatus ct_form_new(int64_t a, int64_t b, int64_t c, int64_t d, struct CtForm **out_form);

/**
 * Releases a form handle; null is ignored.
 */
void ct_form_free(struct CtForm *form);

/**
 * Writes (a, b, c, d) to `out_coeffs[0..4]`.
 */
enum CtStatus ct_form_coefficients(const struct CtForm *form, int64_t *out_coeffs);

/**
 * Reduced discriminant.
 */
enum CtStatus ct_form_discriminant(const struct CtForm *form, int64_t *out_disc);

/**
 * Canonical SL₂(Z) representative, as a new handle.
 */
enum CtStatus ct_form_canonical(const struct CtForm *form, struct CtForm **out_form);

/**
 * Whether the form has a rational linear factor.
 */
enum CtStatus ct_form_is_reducible(const struct CtForm *form, bool *out_flag);

/**
 * Whether the Hessian covariant is primitive.
 */
enum CtStatus ct_form_is_projective(const struct CtForm *form, bool *out_flag);

/**
 * All classes of reduced discriminant `disc` (|disc| ≤ 3000).
 */
enum CtStatus ct_classes_with_disc(int64_t disc, struct CtClassList **out_list);

enum CtStatus ct_class_list_len(const struct CtClassList *list, size_t *out_len);

/**
 * The form at `index`, as a new handle.
 */
enum CtStatus ct_class_list_get(const struct CtClassList *list,
                                size_t index,
                                struct CtForm **out_form);

void ct_class_list_free(struct CtClassList *list);

/**
 * Number of classes with 0 < ±disc < x (x ≤ 10⁶).
 */
enum CtStatus ct_count_classes(uint64_t x,
                               enum CtSign sign,
                               bool irreducible_only,
                               uint64_t *out_count);

/**
 * |Cl₃(O)| for the order of discriminant `disc`.
 */
enum CtStatus ct_cl3_count(int64_t disc, uint64_t *out_count);

/**
 * |I₃(O)| for the order of discriminant `disc`.
 */
enum CtStatus ct_ideal3_count(int64_t disc, uint64_t *out_count);

/**
 * Number of cubic fields of squarefree discriminant `disc`.
 */
enum CtStatus ct_cubic_census(int64_t disc, uint64_t *out_count);

/**
 * Parses a family from its JSON text.
 */
enum CtStatus ct_family_parse(const char *json, struct CtFamily **out_family);

void ct_family_free(struct CtFamily *family);

/**
 * Whether the order of discriminant `disc` belongs to the family.
 */
enum CtStatus ct_family_contains(const struct CtFamily *family, int64_t disc, bool *out_flag);

/**
 * Certified enclosure [lo, hi] of the family's mass, using primes up to
 * `cutoff` exactly.
 */
enum CtStatus ct_family_mass(const struct CtFamily *family,
                             uint64_t cutoff,
                             double *out_lo,
                             double *out_hi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBIC_TORSION_H */
