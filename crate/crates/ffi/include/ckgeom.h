#ifndef CKGEOM_H
#define CKGEOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CkStatus {
  CkStatus_Ok = 0,
  CkStatus_NullPointer = 1,
  CkStatus_InvalidUtf8 = 2,
  /**
   * Input could not be parsed or has inconsistent shape.
   */
  CkStatus_Malformed = 3,
  /**
   * Mathematically inadmissible input or unsupported construction.
   */
  CkStatus_Rejected = 4,
  /**
   * The computation completed but its checks did not pass.
   */
  CkStatus_VerifyFailed = 5,
  CkStatus_Panic = 6,
} CkStatus;

/**
 * Opaque truncated power series.
 */
typedef struct CkJet CkJet;

/**
 * Opaque build report.
 */
typedef struct CkReport CkReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable message of the last failure on this thread, or null.
 * Valid until the next failing call on the same thread.
 */
const char *ckgeom_last_error_message(void);

/**
 * Stable machine-readable reason of the last failure on this thread, or null.
 */
const char *ckgeom_last_error_reason(void);

/**
 * Number of free functions and initial slices of construction `tag` in
 * dimension `n`.
 *
 * # Safety
 * `tag` must be a nul-terminated string; the outputs must be writable.
 */
enum CkStatus ckgeom_census_counts(const char *tag,
                                   uintptr_t n,
                                   uintptr_t *free_functions,
                                   uintptr_t *initial_slices);

/**
 * Runs a scenario given as JSON. On success `*out` owns a report to be
 * released with [`ckgeom_report_free`]. A report whose checks fail is still
 * returned, with status `VerifyFailed`.
 *
 * # Safety
 * `scenario_json` must be a nul-terminated string; `out` must be writable.
 */
enum CkStatus ckgeom_run_scenario(const char *scenario_json, struct CkReport **out);

/**
 * Parses a report from JSON.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum CkStatus ckgeom_report_from_json(const char *json, struct CkReport **out);

/**
 * Serializes a report; release the string with [`ckgeom_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum CkStatus ckgeom_report_to_json(const struct CkReport *report, char **out);

/**
 * Recomputes the report's checks, at `order` when it is non-negative and at
 * the advertised orders otherwise.
 *
 * # Safety
 * `report` must be a live handle; `passed` must be writable.
 */
enum CkStatus ckgeom_report_verify(const struct CkReport *report, int64_t order, bool *passed);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void ckgeom_report_free(struct CkReport *report);

/**
 * Parses a jet from its JSON form.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum CkStatus ckgeom_jet_from_json(const char *json, struct CkJet **out);

/**
 * Serializes a jet; release the string with [`ckgeom_string_free`].
 *
 * # Safety
 * `jet` must be a live handle; `out` must be writable.
 */
enum CkStatus ckgeom_jet_to_json(const struct CkJet *jet, char **out);

/**
 * Truncated product of two jets of the same shape.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum CkStatus ckgeom_jet_mul(const struct CkJet *a, const struct CkJet *b, struct CkJet **out);

/**
 * # Safety
 * `jet` must be null or a handle not yet freed.
 */
void ckgeom_jet_free(struct CkJet *jet);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void ckgeom_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CKGEOM_H */
