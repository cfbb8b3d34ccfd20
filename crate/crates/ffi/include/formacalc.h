#ifndef FORMACALC_H
#define FORMACALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define FC_OK 0

#define FC_E_SYNTAX 1

#define FC_E_UNBOUND 2

#define FC_E_TYPE 3

#define FC_E_SPACE 4

#define FC_E_DIMENSION 5

#define FC_E_DEGREE 6

#define FC_E_KNOWN_ORDER 7

#define FC_E_NOT_INVERTIBLE 8

#define FC_E_NOT_LOCAL 9

#define FC_E_DEGENERATE_INTERVAL 10

#define FC_E_NOT_NORMALIZED 11

#define FC_E_MISSING_CONFIGURATION 12

#define FC_E_NOT_COMPACTLY_SUPPORTED 13

#define FC_E_INVALID_ARGUMENT 14

#define FC_E_RESIDUAL_NONZERO 15

#define FC_E_IO 16

#define FC_E_INTERNAL 99

// A differential form on a fixed space.
typedef struct FcForm FcForm;

// A truncated formal function on a fixed space.
typedef struct FcFunction FcFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string.
const char *fc_version(void);

// Message of the last failure on this thread; empty after a success. The
// pointer stays valid until the next call into the library.
const char *fc_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void fc_string_free(char *s);

// Parses an expression such as `x1^2*y1 + 1/2` into a function on
// `(n, k)` truncated at `order`.
//
// # Safety
// `expr` must be a valid C string and `result` a writable pointer.
int32_t fc_function_parse(size_t n,
                          size_t k,
                          uint32_t order,
                          const char *expr,
                          struct FcFunction **result);

// # Safety
// `f` must be null or a handle from this library, freed once.
void fc_function_free(struct FcFunction *f);

// `a + b`.
//
// # Safety
// Handles must be valid; `result` writable.
int32_t fc_function_add(const struct FcFunction *a,
                        const struct FcFunction *b,
                        struct FcFunction **result);

// `a · b`, truncated.
//
// # Safety
// Handles must be valid; `result` writable.
int32_t fc_function_mul(const struct FcFunction *a,
                        const struct FcFunction *b,
                        struct FcFunction **result);

// `∂f/∂z_i` for a 0-based joint index (`x` first, then `y`).
//
// # Safety
// `f` must be valid; `result` writable.
int32_t fc_function_deriv(const struct FcFunction *f, size_t i, struct FcFunction **result);

// Value at a point given as comma-separated rationals (`"1/2, -3"`),
// written as canonical text.
//
// # Safety
// `f` must be valid, `point` a C string, `result` writable.
int32_t fc_function_value(const struct FcFunction *f, const char *point, char **result);

// Canonical text of `f`.
//
// # Safety
// `f` must be valid; `result` writable.
int32_t fc_function_to_string(const struct FcFunction *f, char **result);

// Canonical JSON of `f`.
//
// # Safety
// `f` must be valid; `result` writable.
int32_t fc_function_to_json(const struct FcFunction *f, char **result);

// Parses a form expression such as `x1*dx1^^dy1` on `(n, k)`.
//
// # Safety
// `expr` must be a valid C string and `result` writable.
int32_t fc_form_parse(size_t n, size_t k, uint32_t order, const char *expr, struct FcForm **result);

// # Safety
// `w` must be null or a handle from this library, freed once.
void fc_form_free(struct FcForm *w);

// The degree of `w`, or -1 for a null handle.
//
// # Safety
// `w` must be null or valid.
int64_t fc_form_degree(const struct FcForm *w);

// The exterior derivative `dw`.
//
// # Safety
// `w` must be valid; `result` writable.
int32_t fc_form_d(const struct FcForm *w, struct FcForm **result);

// `a ∧ b`.
//
// # Safety
// Handles must be valid; `result` writable.
int32_t fc_form_wedge(const struct FcForm *a, const struct FcForm *b, struct FcForm **result);

// `a + b`.
//
// # Safety
// Handles must be valid; `result` writable.
int32_t fc_form_add(const struct FcForm *a, const struct FcForm *b, struct FcForm **result);

// Writes 1 when `a` and `b` agree modulo their unknown coefficients.
//
// # Safety
// Handles must be valid; `result` writable.
int32_t fc_form_agrees(const struct FcForm *a, const struct FcForm *b, int32_t *result);

// Canonical text of `w`.
//
// # Safety
// `w` must be valid; `result` writable.
int32_t fc_form_to_string(const struct FcForm *w, char **result);

// Runs a script and writes its JSON report. The script's own exit status
// (0 clean, 1 failed check or runtime error, 2 rejected) goes to
// `exit_code` when it is non-null; the return value reports only whether
// the call itself worked.
//
// # Safety
// `source` must be a C string; `report` writable; `exit_code` null or
// writable.
int32_t fc_script_run(const char *source, uint64_t seed, char **report, int32_t *exit_code);

// Runs an invariant suite with its default parameters and writes the JSON
// report. `variant` may be null. `passed` receives 1 or 0 when non-null.
//
// # Safety
// String arguments must be C strings or null where allowed; outputs
// writable.
int32_t fc_check(const char *suite,
                 const char *variant,
                 uint64_t seed,
                 char **report,
                 int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORMACALC_H */
