#ifndef PSTDDM_H
#define PSTDDM_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; 2 and 3 match the exit codes of the `pstddm` CLI.
 */
typedef enum PstddmStatus {
  PSTDDM_STATUS_OK = 0,
  PSTDDM_STATUS_NULL_ARGUMENT = 1,
  PSTDDM_STATUS_CONFIG_ERROR = 2,
  PSTDDM_STATUS_SOLVER_ERROR = 3,
  PSTDDM_STATUS_PANIC = 4,
} PstddmStatus;

/**
 * Experiment configuration.
 */
typedef struct PstddmConfig PstddmConfig;

/**
 * Outcome of a run.
 */
typedef struct PstddmResult PstddmResult;

/**
 * Numbers reported by a run. Errors a mode does not compute are NaN and
 * iteration counts it does not compute are -1.
 */
typedef struct PstddmSummary {
  double k;
  double q;
  uint32_t layers;
  /**
   * 0 when unset.
   */
  uint32_t blocks;
  double gamma0;
  double e_i;
  double e_f;
  double e_s;
  int64_t iters_plain;
  int64_t iters_precond;
  double wall_ms;
  size_t nx;
  size_t ny;
} PstddmSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *pstddm_last_error(void);

/**
 * New configuration with the desk-scale defaults.
 */
struct PstddmConfig *pstddm_config_new(void);

/**
 * Parses a JSON configuration; `*out` receives a new handle on success.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum PstddmStatus pstddm_config_from_json(const char *json, struct PstddmConfig **out);

/**
 * # Safety
 * `config` must be null or a handle from this library, not yet freed.
 */
void pstddm_config_free(struct PstddmConfig *config);

/**
 * # Safety
 * `config` must be a live handle and `mode` a nul-terminated string.
 */
enum PstddmStatus pstddm_config_set_mode(struct PstddmConfig *config, const char *mode);

/**
 * Sets the numeric parameters; `blocks = 0` clears the block count.
 * Values are checked when the configuration is run.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum PstddmStatus pstddm_config_set_parameters(struct PstddmConfig *config,
                                               double k_over_2pi,
                                               double q,
                                               uint32_t layers,
                                               uint32_t blocks,
                                               double gamma0);

/**
 * Validates and runs the configured experiment.
 *
 * # Safety
 * `config` must be a live handle and `out` a valid pointer.
 */
enum PstddmStatus pstddm_run(const struct PstddmConfig *config, struct PstddmResult **out);

/**
 * # Safety
 * `result` must be null or a handle from this library, not yet freed.
 */
void pstddm_result_free(struct PstddmResult *result);

/**
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum PstddmStatus pstddm_result_summary(const struct PstddmResult *result,
                                        struct PstddmSummary *out);

/**
 * Writes the CSV record, the config echo and (for GMRES studies) the
 * residual histories next to `path`.
 *
 * # Safety
 * `result` must be a live handle and `path` a nul-terminated string.
 */
enum PstddmStatus pstddm_result_write_csv(const struct PstddmResult *result, const char *path);

/**
 * `H_0^(1)(re + i im)`, with the branch cut on the negative real axis.
 *
 * # Safety
 * `out_re` and `out_im` must be valid pointers.
 */
enum PstddmStatus pstddm_hankel0(double re, double im, double *out_re, double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSTDDM_H */
