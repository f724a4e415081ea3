#ifndef FETCAM_H
#define FETCAM_H

#pragma once

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FetcamStatus {
  FETCAM_STATUS_OK = 0,
  FETCAM_STATUS_NULL_POINTER = 1,
  FETCAM_STATUS_INVALID_INPUT = 2,
  FETCAM_STATUS_CONFIG = 3,
  FETCAM_STATUS_DIMENSION = 4,
  FETCAM_STATUS_FORMAT = 5,
  FETCAM_STATUS_RESISTANCE_ORDER = 6,
  FETCAM_STATUS_IO = 7,
  FETCAM_STATUS_NOT_PROGRAMMED = 8,
  FETCAM_STATUS_PANIC = 9,
} FetcamStatus;

/**
 * Opaque array handle.
 */
typedef struct FetcamArray FetcamArray;

/**
 * Summary of one search.
 */
typedef struct FetcamSearchStats {
  size_t matched_rows;
  /**
   * Rows that stopped after the first search step.
   */
  size_t step1_terminated_rows;
  /**
   * Nonzero when the second select line never rose.
   */
  uint8_t sel_b_suppressed;
  double latency_s;
  double energy_j;
  double precharge_j;
  double sense_amp_j;
  double divider_static_j;
  double signal_switching_j;
} FetcamSearchStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a calibrated `rows` x `cols` array of `design` (e.g. "1.5T1DG-Fe").
 * `config_json` may be null for the built-in defaults.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum FetcamStatus fetcam_array_new(const char *design,
                                   size_t rows,
                                   size_t cols,
                                   const char *config_json,
                                   struct FetcamArray **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `array` must come from `fetcam_array_new` and not be used afterwards.
 */
void fetcam_array_free(struct FetcamArray *array);

/**
 * Programs the array from newline-separated words over {0,1,X}.
 * `write_energy_j` may be null.
 *
 * # Safety
 * `array` must be a live handle; `contents` NUL-terminated.
 */
enum FetcamStatus fetcam_array_program(struct FetcamArray *array,
                                       const char *contents,
                                       double *write_energy_j);

/**
 * Searches `query` (a word over {0,1}). Writes one byte per row into
 * `match_out` (1 = match); `match_len` must equal the row count. `stats` may
 * be null.
 *
 * # Safety
 * `array` must be a live handle, `query` NUL-terminated, and `match_out`
 * valid for `match_len` bytes.
 */
enum FetcamStatus fetcam_array_search(const struct FetcamArray *array,
                                      const char *query,
                                      uint8_t *match_out,
                                      size_t match_len,
                                      struct FetcamSearchStats *stats);

/**
 * Row and column counts of a handle.
 *
 * # Safety
 * `array` must be a live handle; output pointers may be null.
 */
enum FetcamStatus fetcam_array_shape(const struct FetcamArray *array, size_t *rows, size_t *cols);

/**
 * Figure-of-merit report as JSON. `config_json` may be null. The result must
 * be released with `fetcam_string_free`.
 *
 * # Safety
 * `config_json` must be null or NUL-terminated; `out` must be writable.
 */
enum FetcamStatus fetcam_fom_json(const char *config_json, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void fetcam_string_free(char *s);

/**
 * Message of the last failure on this thread; empty if none. Valid until the
 * next library call on the same thread.
 */
const char *fetcam_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FETCAM_H */
