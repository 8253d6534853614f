/* C interface to the truncated point scheme computations. */

#ifndef PTSCHEME_H
#define PTSCHEME_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum PtsStatus {
  /**
   * Success; out-parameters are filled.
   */
  PtsOk = 0,
  /**
   * The computation rejected its input; see `pts_last_error_message`.
   */
  PtsErrDomain = 1,
  /**
   * The input text did not parse.
   */
  PtsErrParse = 2,
  /**
   * A required pointer argument was null.
   */
  PtsErrNullArgument = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  PtsErrInvalidUtf8 = 4,
  /**
   * An internal invariant failed; the library state is still usable.
   */
  PtsErrPanic = 5,
} PtsStatus;

/**
 * A parsed skew PBW extension.
 */
typedef struct PtsExtension PtsExtension;

/**
 * A parsed graded-algebra presentation.
 */
typedef struct PtsPresentation PtsPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be a pointer previously returned through one of this library's
 * out-parameters and not yet freed.
 */
void pts_string_free(char *s);

/**
 * The most recent error message on this thread, or an empty string. The
 * caller owns the result and frees it with `pts_string_free`.
 */
char *pts_last_error_message(void);

/**
 * Parse presentation text into a handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On `PtsOk` the caller owns the handle and releases it with
 * `pts_presentation_free`.
 */
enum PtsStatus pts_presentation_parse(const char *text, struct PtsPresentation **out);

/**
 * Release a presentation handle. Null is ignored.
 *
 * # Safety
 * `handle` must come from `pts_presentation_parse` and not be freed twice.
 */
void pts_presentation_free(struct PtsPresentation *handle);

/**
 * Render the canonical text of a presentation.
 *
 * # Safety
 * `handle` must be a live presentation handle; `out` must be valid.
 */
enum PtsStatus pts_presentation_render(const struct PtsPresentation *handle, char **out);

/**
 * Multilinearize every relation; the result lists the slotted polynomials.
 *
 * # Safety
 * `handle` must be a live presentation handle; `out` must be valid.
 */
enum PtsStatus pts_multilinearize_json(const struct PtsPresentation *handle, char **out);

/**
 * Enumerate X_m over F_p; points come back as arrays of integer residues.
 *
 * # Safety
 * `handle` must be a live presentation handle; `out` must be valid.
 */
enum PtsStatus pts_scheme_json(const struct PtsPresentation *handle,
                               uint32_t p,
                               uint32_t m,
                               char **out);

/**
 * Search for an empirical stabilization degree; see the library report.
 *
 * # Safety
 * `handle` must be a live presentation handle; `out` must be valid.
 */
enum PtsStatus pts_stabilize_json(const struct PtsPresentation *handle,
                                  uint32_t p,
                                  uint32_t m_max,
                                  char **out);

/**
 * Quantum affine report: the matrices F and G, the variety E, and the
 * successor permutation of E(F_p).
 *
 * # Safety
 * `handle` must be a live presentation handle; `out` must be valid.
 */
enum PtsStatus pts_qaffine_json(const struct PtsPresentation *handle, uint32_t p, char **out);

/**
 * Parse extension-file text into a handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On `PtsOk` the caller owns the handle and releases it with
 * `pts_extension_free`.
 */
enum PtsStatus pts_extension_parse(const char *text, struct PtsExtension **out);

/**
 * Release an extension handle. Null is ignored.
 *
 * # Safety
 * `handle` must come from `pts_extension_parse` or
 * `pts_catalog_instantiate` and not be freed twice.
 */
void pts_extension_free(struct PtsExtension *handle);

/**
 * Render the canonical text of an extension.
 *
 * # Safety
 * `handle` must be a live extension handle; `out` must be valid.
 */
enum PtsStatus pts_extension_render(const struct PtsExtension *handle, char **out);

/**
 * Full point-module analysis of an extension over F_p.
 *
 * # Safety
 * `handle` must be a live extension handle; `out` must be valid.
 */
enum PtsStatus pts_extension_analyze_json(const struct PtsExtension *handle,
                                          uint32_t p,
                                          uint32_t m_max,
                                          char **out);

/**
 * List the built-in catalog: names, summaries, and constants.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PtsStatus pts_catalog_json(char **out);

/**
 * Instantiate a catalog entry. `overrides_json` is null or a JSON object
 * mapping constant names to literal strings, e.g. `{"q": "3"}`.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string, `overrides_json` null or
 * the same, `out` a valid pointer. On `PtsOk` the caller owns the handle.
 */
enum PtsStatus pts_catalog_instantiate(const char *name,
                                       const char *overrides_json,
                                       struct PtsExtension **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTSCHEME_H */
