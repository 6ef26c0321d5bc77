#ifndef MODCALC_H
#define MODCALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum McStatus {
  MC_STATUS_OK = 0,
  MC_STATUS_NULL_POINTER = 1,
  MC_STATUS_INVALID_ARGUMENT = 2,
  MC_STATUS_NOT_PRIME = 3,
  MC_STATUS_NOT_UNIT = 4,
  MC_STATUS_OVERFLOW = 5,
  MC_STATUS_PRECONDITION = 6,
  MC_STATUS_UNKNOWN_CLAIM = 7,
  MC_STATUS_INTERNAL = 8,
} McStatus;

/**
 * Logarithm context for a fixed `(p, m)` with its generator resolved.
 */
typedef struct McLogContext McLogContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a context for `p^m`; `*out` receives an owned handle.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum McStatus mc_log_context_new(uint64_t p, uint32_t m, struct McLogContext **out);

/**
 * Releases a handle from [`mc_log_context_new`]; null is ignored.
 *
 * # Safety
 * `ctx` must be null or a live handle not freed before.
 */
void mc_log_context_free(struct McLogContext *ctx);

/**
 * Modulus `p^m` of the context.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_log_context_modulus(const struct McLogContext *ctx, uint64_t *out);

/**
 * `E` modulo `p^m`.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_compute_e(const struct McLogContext *ctx, uint64_t *out);

/**
 * The generator `e` of the context.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_generator(const struct McLogContext *ctx, uint64_t *out);

/**
 * `E^x` modulo `p^m`.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_pow_e(const struct McLogContext *ctx, int64_t x, uint64_t *out);

/**
 * Full logarithm of a unit, modulo `p^(m-1)(p-1)`.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_lm_full(const struct McLogContext *ctx, int64_t x, uint64_t *out);

/**
 * Principal logarithm of `u ≡ 1 (mod p)`, modulo `p^(m-1)`.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_lm_principal(const struct McLogContext *ctx, int64_t u, uint64_t *out);

/**
 * Power logarithm modulo `p^m`.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_plm(const struct McLogContext *ctx, int64_t x, uint64_t *out);

/**
 * `p`-th root modulo `p^m` of `w ≡ 1 (mod p^2)` given modulo `p^(m+1)`.
 *
 * # Safety
 * `ctx` must be a live handle; `out` valid for writes.
 */
enum McStatus mc_pth_root_unit(const struct McLogContext *ctx, uint64_t w, uint64_t *out);

/**
 * Centered representative of `x` modulo `q`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum McStatus mc_centered_rep(int64_t x, uint64_t q, int64_t *out);

/**
 * Product of the distinct primes dividing `q`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum McStatus mc_radical(uint64_t q, uint64_t *out);

/**
 * Carmichael exponent of `(Z/x)^*`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum McStatus mc_carmichael(uint64_t x, uint64_t *out);

/**
 * Integration kernel `I^t(x)` modulo the prime `p`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum McStatus mc_kernel_i(uint64_t p, uint64_t t, uint64_t x, uint64_t *out);

/**
 * Exponent ratio test `q/p <= 6·⌊(q-2)/39⌋`.
 */
bool mc_ratio_condition(uint64_t p, uint64_t q);

/**
 * Runs one claim and returns its report document as an owned JSON string.
 *
 * # Safety
 * `id` must be a nul-terminated string; `out` valid for writes.
 */
enum McStatus mc_run_claim_json(const char *id, uint64_t p, uint32_t m, uint64_t seed, char **out);

/**
 * Releases a string returned by the library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not freed before.
 */
void mc_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library and valid until the next call.
 */
const char *mc_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODCALC_H */
