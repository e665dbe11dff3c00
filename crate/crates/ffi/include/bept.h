#ifndef BEPT_H
#define BEPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum BeptStatus {
  BEPT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BEPT_STATUS_NULL_POINTER = 1,
  BEPT_STATUS_INVALID_UTF8 = 2,
  /**
   * The model or configuration was rejected.
   */
  BEPT_STATUS_INVALID_INPUT = 3,
  /**
   * An internal invariant failed.
   */
  BEPT_STATUS_INTERNAL = 4,
  BEPT_STATUS_PANIC = 5,
} BeptStatus;

typedef enum BeptModelFormat {
  BEPT_MODEL_FORMAT_DSL = 0,
  BEPT_MODEL_FORMAT_PNML = 1,
} BeptModelFormat;

/**
 * Opaque translator. Create with [`bept_translator_new`], release with
 * [`bept_translator_free`].
 */
typedef struct BeptTranslator BeptTranslator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *bept_last_error(void);

/**
 * Static, NUL-terminated version string.
 */
const char *bept_version(void);

/**
 * Creates a translator. `max_paragraph_words` of 0 keeps the default.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum BeptStatus bept_translator_new(size_t max_paragraph_words, struct BeptTranslator **out);

/**
 * # Safety
 * `translator` must come from [`bept_translator_new`] and not be freed
 * twice. Null is ignored.
 */
void bept_translator_free(struct BeptTranslator *translator);

/**
 * Translates `model`, a NUL-terminated UTF-8 text. Either output pointer
 * may be null when that rendering is not wanted.
 *
 * # Safety
 * `translator` must be live, `model` a valid C string, and non-null output
 * pointers writable.
 */
enum BeptStatus bept_translate(const struct BeptTranslator *translator,
                               const char *model,
                               enum BeptModelFormat format,
                               char **out_markdown,
                               char **out_json);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void bept_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BEPT_H */
