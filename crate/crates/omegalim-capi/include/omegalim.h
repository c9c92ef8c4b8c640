#ifndef OMEGALIM_H
#define OMEGALIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome. `OK` and `CHECK_FAILED` both produce a report; everything
 * else leaves the out-parameters untouched.
 */
typedef enum {
  OMEGALIM_STATUS_OK = 0,
  /**
   * The command ran and some requested check failed.
   */
  OMEGALIM_STATUS_CHECK_FAILED = 1,
  /**
   * Malformed config text.
   */
  OMEGALIM_STATUS_PARSE_ERROR = 2,
  /**
   * Well-formed text describing an invalid object, or a command/config
   * mismatch.
   */
  OMEGALIM_STATUS_SEMANTIC_ERROR = 3,
  OMEGALIM_STATUS_NULL_ARGUMENT = 4,
  OMEGALIM_STATUS_INVALID_UTF8 = 5,
  OMEGALIM_STATUS_UNKNOWN_COMMAND = 6,
  OMEGALIM_STATUS_INTERNAL_PANIC = 7,
} OmegalimStatus;

/**
 * Opaque parsed configuration.
 */
typedef struct OmegalimConfig OmegalimConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failing call on this thread. The pointer is
 * owned by the library and valid until the next API call on this thread.
 */
const char *omegalim_last_error(void);

/**
 * Static version string of the underlying engine.
 */
const char *omegalim_version(void);

/**
 * Parses a config document. On success writes a heap handle to `out`;
 * release it with `omegalim_config_free`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
OmegalimStatus omegalim_config_parse(const char *text, OmegalimConfig **out);

/**
 * Releases a handle returned by `omegalim_config_parse`. NULL is a no-op.
 *
 * # Safety
 * `config` must be NULL or a handle from `omegalim_config_parse` that has
 * not been freed yet.
 */
void omegalim_config_free(OmegalimConfig *config);

/**
 * Runs one command (`validate`, `delta`, `intersect`, `threads`,
 * `build-thread`, `verify`, `examples`) against a parsed config and writes
 * the machine-format JSON report to `out_json`; release it with
 * `omegalim_string_free`. Returns `OK` when all requested checks pass and
 * `CHECK_FAILED` when the report carries a failing check; both produce a
 * report.
 *
 * # Safety
 * `config` must be a live handle, `command` a valid NUL-terminated string,
 * and `out_json` a valid pointer.
 */
OmegalimStatus omegalim_run(const OmegalimConfig *config, const char *command, char **out_json);

/**
 * Runs the built-in worked scenarios without a config; otherwise behaves
 * like `omegalim_run`.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
OmegalimStatus omegalim_examples(char **out_json);

/**
 * Releases a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been
 * freed yet.
 */
void omegalim_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* OMEGALIM_H */
