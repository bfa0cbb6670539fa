#ifndef CLIFFGRAV_H
#define CLIFFGRAV_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  CG_STATUS_INVALID_UTF8 = 2,
  CG_STATUS_CONFIG = 3,
  CG_STATUS_SCENARIO = 4,
  CG_STATUS_PANIC = 5,
} CgStatus;

typedef enum CgFormat {
  CG_FORMAT_JSON = 0,
  CG_FORMAT_CSV = 1,
  CG_FORMAT_TEXT = 2,
} CgFormat;

/**
 * Opaque suite configuration.
 */
typedef struct CgConfig CgConfig;

/**
 * Opaque verification report.
 */
typedef struct CgReport CgReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *cg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cg_version(void);

/**
 * Number of identities the suite evaluates.
 */
size_t cg_identity_count(void);

/**
 * Creates a default configuration for `scenario`. Returns NULL on error.
 *
 * # Safety
 * `scenario` must be NULL or a valid NUL-terminated string.
 */
struct CgConfig *cg_config_new(const char *scenario);

/**
 * # Safety
 * `cfg` must be NULL or a handle from [`cg_config_new`] not yet freed.
 */
void cg_config_free(struct CgConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live config handle and `name` a NUL-terminated string.
 */
enum CgStatus cg_config_set_param(struct CgConfig *cfg, const char *name, double value);

/**
 * # Safety
 * `cfg` must be a live config handle and `id` a NUL-terminated string.
 */
enum CgStatus cg_config_set_tolerance(struct CgConfig *cfg, const char *id, double value);

/**
 * # Safety
 * `cfg` must be a live config handle.
 */
enum CgStatus cg_config_set_n_points(struct CgConfig *cfg, size_t n);

/**
 * Replaces the sample set with `n` points read from `coords`, four doubles
 * per point.
 *
 * # Safety
 * `cfg` must be a live config handle and `coords` must point to `4 * n`
 * readable doubles.
 */
enum CgStatus cg_config_set_points(struct CgConfig *cfg, const double *coords, size_t n);

/**
 * Sets the finite-difference step and order (2 or 4).
 *
 * # Safety
 * `cfg` must be a live config handle.
 */
enum CgStatus cg_config_set_fd(struct CgConfig *cfg, double step, uint32_t order);

/**
 * # Safety
 * `cfg` must be a live config handle.
 */
enum CgStatus cg_config_set_mass(struct CgConfig *cfg, double mass);

/**
 * Runs the suite. On success `*out` receives a report handle owned by the
 * caller.
 *
 * # Safety
 * `cfg` must be a live config handle and `out` a writable pointer.
 */
enum CgStatus cg_run_suite(const struct CgConfig *cfg, struct CgReport **out);

/**
 * # Safety
 * `r` must be NULL or a handle from [`cg_run_suite`] not yet freed.
 */
void cg_report_free(struct CgReport *r);

/**
 * # Safety
 * `r` must be NULL or a live report handle.
 */
size_t cg_report_pass_count(const struct CgReport *r);

/**
 * # Safety
 * `r` must be NULL or a live report handle.
 */
size_t cg_report_fail_count(const struct CgReport *r);

/**
 * # Safety
 * `r` must be NULL or a live report handle.
 */
size_t cg_report_skip_count(const struct CgReport *r);

/**
 * Looks up one identity row. `*max_residual` is NaN when the identity was
 * skipped. Returns [`CgStatus::Config`] for an unknown id.
 *
 * # Safety
 * `r` must be a live report handle, `id` a NUL-terminated string, and
 * `passed` and `max_residual` writable pointers.
 */
enum CgStatus cg_report_identity(const struct CgReport *r,
                                 const char *id,
                                 bool *passed,
                                 double *max_residual);

/**
 * Renders the report. On success `*out` receives a string to release with
 * [`cg_string_free`].
 *
 * # Safety
 * `r` must be a live report handle and `out` a writable pointer.
 */
enum CgStatus cg_report_render(const struct CgReport *r, enum CgFormat format, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void cg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLIFFGRAV_H */
