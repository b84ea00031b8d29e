#ifndef AFFINE_HECKE_H
#define AFFINE_HECKE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum AhStatus {
  AH_STATUS_OK = 0,
  AH_STATUS_NULL_POINTER = 1,
  AH_STATUS_INVALID_UTF8 = 2,
  AH_STATUS_UNKNOWN_TYPE = 3,
  AH_STATUS_INVALID_PARAMETERS = 4,
  AH_STATUS_PARSE_ERROR = 5,
  AH_STATUS_BOUNDARY_PARAMETERS = 6,
  AH_STATUS_OUT_OF_RANGE = 7,
  AH_STATUS_RUNTIME = 8,
  AH_STATUS_PANIC = 9,
} AhStatus;

// An algebra with fixed configuration and parameters.
typedef struct AhAlgebra AhAlgebra;

// The outcome of one Plancherel check.
typedef struct AhReport AhReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty if none.
// The pointer stays valid until the next failing call on the same thread.
const char *ah_last_error(void);

// Builds an algebra from a configuration tag (`"A1Q"`, ..., `"BC2Q"`) and
// its parameters.
//
// # Safety
// `type_tag` must be a nul-terminated string, `params` must point to
// `n_params` doubles, and `out` must be writable.
enum AhStatus ah_algebra_new(const char *type_tag,
                             const double *params,
                             size_t n_params,
                             struct AhAlgebra **out);

// Releases an algebra. Null is ignored.
//
// # Safety
// `alg` must come from `ah_algebra_new` and not be used afterwards.
void ah_algebra_free(struct AhAlgebra *alg);

// Rank of the algebra, or 0 for a null handle.
//
// # Safety
// `alg` must be null or a live handle.
size_t ah_algebra_rank(const struct AhAlgebra *alg);

// Canonical trace of a parsed element.
//
// # Safety
// `alg` must be a live handle, `element` a nul-terminated string, and
// `re`/`im` writable.
enum AhStatus ah_trace(const struct AhAlgebra *alg, const char *element, double *re, double *im);

// Evaluates both sides of the Plancherel formula for one element on an
// `resolution`-point grid per torus direction.
//
// # Safety
// `alg` must be a live handle, `element` a nul-terminated string, and `out`
// writable.
enum AhStatus ah_verify(const struct AhAlgebra *alg,
                        const char *element,
                        size_t resolution,
                        struct AhReport **out);

// Releases a report. Null is ignored.
//
// # Safety
// `report` must come from `ah_verify` and not be used afterwards.
void ah_report_free(struct AhReport *report);

// `Tr(h)`.
//
// # Safety
// `report` must be a live handle and `re`/`im` writable.
enum AhStatus ah_report_lhs(const struct AhReport *report, double *re, double *im);

// Sum of the spectral terms.
//
// # Safety
// `report` must be a live handle and `re`/`im` writable.
enum AhStatus ah_report_rhs(const struct AhReport *report, double *re, double *im);

// `|lhs − rhs| / max(|lhs|, 1)`, or NaN for a null handle.
//
// # Safety
// `report` must be null or a live handle.
double ah_report_rel_err(const struct AhReport *report);

// Number of spectral terms, or 0 for a null handle.
//
// # Safety
// `report` must be null or a live handle.
size_t ah_report_term_count(const struct AhReport *report);

// Label and value of term `index`. The label is owned by the report.
//
// # Safety
// `report` must be a live handle; `label`, `re` and `im` must be writable.
enum AhStatus ah_report_term(const struct AhReport *report,
                             size_t index,
                             const char **label,
                             double *re,
                             double *im);

// The report as JSON; release with `ah_string_free`. Null on failure.
//
// # Safety
// `report` must be null or a live handle.
char *ah_report_to_json(const struct AhReport *report);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from `ah_report_to_json` and not be used afterwards.
void ah_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFFINE_HECKE_H */
