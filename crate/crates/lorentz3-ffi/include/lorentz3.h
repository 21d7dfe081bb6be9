/* C interface of the lorentz3 curvature-operator library. */

#ifndef LORENTZ3_H
#define LORENTZ3_H

/* Generated by cbindgen from lorentz3-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every `lz3_*` call.
 */
typedef enum Lz3Status {
  /**
   * Success.
   */
  LZ3_STATUS_OK = 0,
  /**
   * The query ran but the data is not admissible.
   */
  LZ3_STATUS_NOT_ADMISSIBLE = 1,
  /**
   * Malformed input (details via `lz3_last_error_message`).
   */
  LZ3_STATUS_INVALID_INPUT = 2,
  /**
   * A sweep raised a discrepancy flag.
   */
  LZ3_STATUS_DISCREPANCY = 3,
  /**
   * A search exhausted its budget without a witness.
   */
  LZ3_STATUS_INCONCLUSIVE = 4,
  /**
   * A required pointer argument was null.
   */
  LZ3_STATUS_NULL_POINTER = 5,
} Lz3Status;

/**
 * Opaque handle to a metric Lie algebra.
 */
typedef struct Lz3Algebra Lz3Algebra;

/**
 * Opaque handle to a computed curvature operator.
 */
typedef struct Lz3Operator Lz3Operator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing `lz3_*` call on the same thread.
 */
const char *lz3_last_error_message(void);

/**
 * ABI version of this header/library pair.
 */
uint32_t lz3_abi_version(void);

/**
 * Release a string returned by this library.
 */
void lz3_string_free(char *s);

/**
 * Parse a metric Lie algebra from its JSON form (`family` + `params`, or
 * `family = "free"` with explicit brackets and gram matrix).
 */
enum Lz3Status lz3_algebra_from_json(const char *algebra_json, struct Lz3Algebra **out);

/**
 * Build a catalog algebra from a family tag ("A1".."A4", "NA", "NB",
 * "NC1", "NC2") and comma-separated parameters (rationals like "1/2", or
 * decimals to select the floating backend).
 */
enum Lz3Status lz3_algebra_family(const char *family,
                                  const char *params_csv,
                                  struct Lz3Algebra **out);

/**
 * JSON form of the algebra behind a handle.
 */
enum Lz3Status lz3_algebra_to_json(const struct Lz3Algebra *alg, char **out_json);

void lz3_algebra_free(struct Lz3Algebra *alg);

/**
 * Compute the curvature operator of an algebra handle.
 */
enum Lz3Status lz3_operator_compute(const struct Lz3Algebra *alg, struct Lz3Operator **out);

/**
 * Operator matrix, bivector gram and basis labels as JSON.
 */
enum Lz3Status lz3_operator_to_json(const struct Lz3Operator *op, char **out_json);

/**
 * Segre classification of the operator behind a handle.
 */
enum Lz3Status lz3_operator_segre_json(const struct Lz3Operator *op, char **out_json);

void lz3_operator_free(struct Lz3Operator *op);

/**
 * Operator and Segre data of a locally symmetric catalog entry.
 */
enum Lz3Status lz3_symmetric_operator_json(const char *spec_json, char **out_json);

/**
 * Admissibility verdict for prescribed Segre data. Returns
 * `LZ3_NOT_ADMISSIBLE` (with the verdict still written) when no condition
 * matches.
 */
enum Lz3Status lz3_admissible_json(const char *segre_json, char **out_verdict_json);

/**
 * Search for a realizing catalog entry for admissible Segre data.
 * `family` may be null (search every family in a type-suited order).
 */
enum Lz3Status lz3_realize_json(const char *segre_json,
                                const char *family,
                                uint64_t seed,
                                char **out_json);

/**
 * Run a sweep from a JSON config; the region summary is written to
 * `out_summary_json`. Returns `LZ3_DISCREPANCY` when any row was flagged.
 */
enum Lz3Status lz3_sweep_json(const char *config_json, char **out_summary_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LORENTZ3_H */
