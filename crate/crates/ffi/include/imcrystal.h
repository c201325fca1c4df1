#ifndef IMCRYSTAL_H
#define IMCRYSTAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ImcStatus {
  IMC_STATUS_OK = 0,
  IMC_STATUS_NULL_ARGUMENT = 1,
  IMC_STATUS_INVALID_UTF8 = 2,
  IMC_STATUS_UNKNOWN_FAMILY = 3,
  IMC_STATUS_INVALID_RANK = 4,
  IMC_STATUS_INVALID_CARTAN = 5,
  IMC_STATUS_INDEX_OUT_OF_RANGE = 6,
  IMC_STATUS_UNSUPPORTED_PAIRING = 7,
  IMC_STATUS_WINDOW_TOO_LARGE = 8,
  IMC_STATUS_INVALID_WINDOW = 9,
  IMC_STATUS_NOT_ORDERED = 10,
  IMC_STATUS_STRAIGHTEN_DIVERGED = 11,
  IMC_STATUS_NO_CASE = 12,
  IMC_STATUS_RESIDUAL_NOT_ORDERED = 13,
  IMC_STATUS_SEARCH_EXHAUSTED = 14,
  IMC_STATUS_PARSE = 15,
  IMC_STATUS_INVALID_ARGUMENT = 16,
  IMC_STATUS_PANIC = 17,
} ImcStatus;

typedef enum ImcVariant {
  IMC_VARIANT_TWISTED = 0,
  IMC_VARIANT_CLASSIC = 1,
} ImcVariant;

// Opaque Cartan data handle.
typedef struct ImcCartan ImcCartan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds Cartan data for a family name (`A`..`G`, `E6`, `F4`, ...) and rank.
//
// # Safety
// `family` must be a valid C string and `out` a valid pointer.
enum ImcStatus imc_cartan_new(const char *family, size_t rank, struct ImcCartan **out);

// Releases a handle from `imc_cartan_new`. Null is ignored.
//
// # Safety
// `h` must come from `imc_cartan_new` and not be used afterwards.
void imc_cartan_free(struct ImcCartan *h);

// Number of nodes, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
size_t imc_cartan_rank(const struct ImcCartan *h);

// `(α_i|α_j)` for 1-based nodes.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum ImcStatus imc_cartan_pairing(const struct ImcCartan *h, size_t i, size_t j, int64_t *out);

// Cartan matrix, symmetrizers, pairing matrix and diagram as JSON.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum ImcStatus imc_describe(const struct ImcCartan *h, char **out);

// g-table entry for nodes `i`, `j` and index `r`, as `[[2e, c], ...]`.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum ImcStatus imc_g_qinv(const struct ImcCartan *h, size_t i, size_t j, uint32_t r, char **out);

// Twisted product of two generators such as `"x[1,0]"`, straightened.
//
// # Safety
// `h` must be a live handle; strings must be valid C strings; `out` valid.
enum ImcStatus imc_star(const struct ImcCartan *h, const char *left, const char *right, char **out);

// `x̃` of a generator applied to an ordered word such as `"x[1,1] x[1,0]"`.
//
// # Safety
// As for `imc_star`.
enum ImcStatus imc_xtilde(const struct ImcCartan *h,
                          const char *generator,
                          const char *word,
                          char **out);

// Ω of node `i` and argument `m` applied to an ordered word.
//
// # Safety
// As for `imc_star`.
enum ImcStatus imc_omega(const struct ImcCartan *h,
                         enum ImcVariant variant,
                         size_t i,
                         int64_t m,
                         const char *word,
                         char **out);

// Bilinear form of two ordered words.
//
// # Safety
// As for `imc_star`.
enum ImcStatus imc_pair(const struct ImcCartan *h, const char *left, const char *right, char **out);

// Runs one suite (`star-order`, `omega-order`, `gram`, `lattice`, `basis`)
// over a window given as JSON:
// `{"max_len":2,"kmin":-1,"kmax":1,"mmin":-1,"mmax":1,"nodes":null}`.
//
// # Safety
// As for `imc_star`.
enum ImcStatus imc_verify(const struct ImcCartan *h,
                          const char *suite,
                          const char *window_json,
                          char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void imc_string_free(char *s);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into the library on the same thread.
const char *imc_last_error_message(void);

// Library version as a static C string.
const char *imc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IMCRYSTAL_H */
