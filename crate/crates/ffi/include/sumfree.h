#ifndef SUMFREE_H
#define SUMFREE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_ARGUMENT = 2,
  SF_STATUS_OUT_OF_UNIVERSE = 3,
  SF_STATUS_UNDEFINED_SPAN = 4,
  SF_STATUS_TOO_SMALL = 5,
  SF_STATUS_BUDGET_EXCEEDED = 6,
  SF_STATUS_INSTANCE_TOO_LARGE = 7,
  SF_STATUS_ORACLE_TOO_LARGE = 8,
  SF_STATUS_SAMPLING_INFEASIBLE = 9,
  SF_STATUS_UNKNOWN_FORMULA = 10,
  SF_STATUS_IO = 11,
  SF_STATUS_BUFFER_TOO_SMALL = 12,
  SF_STATUS_OVERFLOW = 13,
  SF_STATUS_PANIC = 14,
} SfStatus;

typedef enum SfConvention {
  /**
   * x + x = z also counts as a violation.
   */
  SF_CONVENTION_EQUAL_SUMMANDS = 0,
  /**
   * Only x + y = z with x ≠ y.
   */
  SF_CONVENTION_DISTINCT_SUMMANDS = 1,
} SfConvention;

/**
 * Opaque arbitrary-precision count.
 */
typedef struct SfBigCount SfBigCount;

/**
 * Opaque set of positive integers.
 */
typedef struct SfIntSet SfIntSet;

/**
 * Statistics of a set relative to `[n]`. Half-integers are stored doubled.
 */
typedef struct SfStatistics {
  size_t m;
  size_t ell;
  uint64_t k_twice;
  /**
   * `-1` when no element lies in the lower half.
   */
  int64_t a_twice;
  bool odd;
} SfStatistics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `cap`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t sf_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Builds a set inside `[1, bound]` from `len` members (duplicates allowed).
 *
 * # Safety
 * `members` must point to `len` values (or be null with `len == 0`); `out` must be writable.
 */
enum SfStatus sf_intset_new(uint32_t bound,
                            const uint32_t *members,
                            size_t len,
                            struct SfIntSet **out);

/**
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void sf_intset_free(struct SfIntSet *set);

/**
 * # Safety
 * `set` must be a live handle or null (which yields 0).
 */
size_t sf_intset_len(const struct SfIntSet *set);

/**
 * Writes the members ascending into `buf`. `*len` receives the member count;
 * fails with `SF_STATUS_BUFFER_TOO_SMALL` when `cap` is short.
 *
 * # Safety
 * `buf` must point to `cap` writable values; `len` must be writable.
 */
enum SfStatus sf_intset_members(const struct SfIntSet *set, uint32_t *buf, size_t cap, size_t *len);

/**
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_is_sum_free(const struct SfIntSet *set, enum SfConvention conv, bool *out);

/**
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_statistics(const struct SfIntSet *set, uint32_t n, struct SfStatistics *out);

/**
 * `A + B` as a new handle.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum SfStatus sf_sumset(const struct SfIntSet *a, const struct SfIntSet *b, struct SfIntSet **out);

/**
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_span(const struct SfIntSet *set, uint32_t *out);

/**
 * `|S + S| / |S|` in lowest terms.
 *
 * # Safety
 * `set` must be a live handle; `num` and `den` must be writable.
 */
enum SfStatus sf_doubling(const struct SfIntSet *set, uint64_t *num, uint64_t *den);

/**
 * Number of sum-free subsets of `[n]` of size `m`, or of any size when `m < 0`.
 * `threads == 0` uses every core; `budget == 0` keeps the default node budget.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_count_sum_free(uint32_t n,
                                int64_t m,
                                enum SfConvention conv,
                                size_t threads,
                                uint64_t budget,
                                struct SfBigCount **out);

/**
 * Sum-free `m`-subsets of `{⌈n/2⌉ − a, ..., n}`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_count_in_window(uint32_t n,
                                 uint32_t a,
                                 size_t m,
                                 enum SfConvention conv,
                                 size_t threads,
                                 uint64_t budget,
                                 struct SfBigCount **out);

/**
 * `p(k)`, or the number of partitions of `k` into `ell` distinct parts when `ell > 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_partitions(uint32_t k, size_t ell, struct SfBigCount **out);

/**
 * # Safety
 * `count` must come from this library and not be used afterwards.
 */
void sf_bigcount_free(struct SfBigCount *count);

/**
 * # Safety
 * `count` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_bigcount_to_u64(const struct SfBigCount *count, uint64_t *out);

/**
 * Decimal digits, NUL-terminated. `*needed` receives the digit count; fails
 * with `SF_STATUS_BUFFER_TOO_SMALL` unless `cap > digits`.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes; `needed` must be writable.
 */
enum SfStatus sf_bigcount_to_string(const struct SfBigCount *count,
                                    char *buf,
                                    size_t cap,
                                    size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMFREE_H */
