#ifndef CONVEX_CHAINS_H
#define CONVEX_CHAINS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum cc_status {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  // Argument outside the supported range.
  CC_STATUS_DOMAIN = 2,
  // Table or search larger than the configured budget.
  CC_STATUS_BUDGET = 3,
  CC_STATUS_POLE = 4,
  CC_STATUS_NOT_ENOUGH_ZEROS = 5,
  // A numerical method did not reach its tolerance.
  CC_STATUS_CONVERGENCE = 6,
  // Index past the end of a handle.
  CC_STATUS_OUT_OF_RANGE = 7,
  CC_STATUS_IO = 8,
  // Anything else, including a caught panic.
  CC_STATUS_INTERNAL = 9,
} cc_status;

// Exact chain counts `p(a, b)` for every cell of a box.
typedef struct cc_count_table cc_count_table;

// Zeta zeros on the critical line with `ζ'(ρ)`.
typedef struct cc_zeros cc_zeros;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until
// the next failing call on the same thread.
const char *cc_last_error(void);

// Library version as a static string.
const char *cc_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void cc_string_free(char *s);

// Computes `p(a, b)` for `0 <= a <= n1`, `0 <= b <= n2`.
//
// # Safety
// `out` must be valid for writing a pointer.
enum cc_status cc_count_table_new(uint32_t n1, uint32_t n2, struct cc_count_table **out);

// Writes `p(a, b)` as a decimal string to `*out`.
//
// # Safety
// `table` must be a live handle; `out` must be valid for writing.
enum cc_status cc_count_table_get(const struct cc_count_table *table,
                                  uint32_t a,
                                  uint32_t b,
                                  char **out);

// # Safety
// `table` must be NULL or a handle from [`cc_count_table_new`] not yet freed.
void cc_count_table_free(struct cc_count_table *table);

// Number of polyomino paths of total length `n`, as a decimal string.
//
// # Safety
// `out` must be valid for writing a pointer.
enum cc_status cc_polyomino_count(uint32_t n, char **out);

// `log Z(β, β)` truncated with a certified tail bound below `tol`.
//
// # Safety
// `value` must be valid for writing; `tail_bound` may be NULL.
enum cc_status cc_log_z(double beta, double tol, double *value, double *tail_bound);

// `β` solving `E_β[X₁ + X₂] = 2n`.
//
// # Safety
// `beta` must be valid for writing.
enum cc_status cc_calibrate(uint64_t n, double *beta);

// Remainder integral along `Re s = -1/2`.
//
// # Safety
// `value` must be valid for writing.
enum cc_status cc_i_err(double beta, double *value);

// Zero-sum oscillatory term over the first `pairs` zero pairs.
//
// # Safety
// `value` must be valid for writing.
enum cc_status cc_i_crit(double beta, size_t pairs, double *value);

// Decimal log of the asymptotic estimate of `p(n)`.
//
// # Safety
// `log10_value` must be valid for writing.
enum cc_status cc_estimate_p(uint64_t n, size_t pairs, double *log10_value);

// Zeros `1/2 + iγ` with `0 < γ <= height <= 60`.
//
// # Safety
// `out` must be valid for writing a pointer.
enum cc_status cc_zeros_new(double height, struct cc_zeros **out);

// Number of zeros in the handle; 0 for NULL.
//
// # Safety
// `zeros` must be NULL or a live handle.
size_t cc_zeros_len(const struct cc_zeros *zeros);

// The `index`-th zero: `γ` and `ζ'(ρ)`. Any out-pointer may be NULL.
//
// # Safety
// `zeros` must be a live handle; non-NULL out-pointers must be writable.
enum cc_status cc_zeros_get(const struct cc_zeros *zeros,
                            size_t index,
                            double *gamma,
                            double *zeta_prime_re,
                            double *zeta_prime_im);

// # Safety
// `zeros` must be NULL or a handle from [`cc_zeros_new`] not yet freed.
void cc_zeros_free(struct cc_zeros *zeros);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONVEX_CHAINS_H */
