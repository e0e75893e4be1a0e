#ifndef WICKS_H
#define WICKS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WicksStatus {
  WicksStatus_Ok = 0,
  WicksStatus_NullPointer = 1,
  WicksStatus_InvalidUtf8 = 2,
  WicksStatus_Parse = 3,
  WicksStatus_Input = 4,
  WicksStatus_Limit = 5,
  WicksStatus_Failed = 6,
  WicksStatus_Panic = 7,
} WicksStatus;

/**
 * Word problem oracle for a presented group.
 */
typedef struct WicksOracle WicksOracle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *wicks_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void wicks_string_free(char *s);

/**
 * Oracle of the free group on the first `rank` letters.
 *
 * # Safety
 * `out_oracle` must be a valid pointer.
 */
enum WicksStatus wicks_oracle_free_group(uintptr_t rank, struct WicksOracle **out_oracle);

/**
 * Oracle of a presentation given as JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_oracle` a valid pointer.
 */
enum WicksStatus wicks_oracle_from_json(const char *json, struct WicksOracle **out_oracle);

/**
 * # Safety
 * `o` must be null or an oracle created by this library and not yet freed.
 */
void wicks_oracle_free(struct WicksOracle *o);

/**
 * Whether `word_text` is a Wicks form.
 *
 * # Safety
 * `word_text` must be a NUL-terminated string and `out_result` a valid pointer.
 */
enum WicksStatus wicks_is_wicks_form(const char *word_text, bool *out_result);

/**
 * Genus of a tuple of words with default caps; `-1` when unknown within
 * the caps.
 *
 * # Safety
 * `words` must point to `count` NUL-terminated strings and `out_genus` must
 * be a valid pointer.
 */
enum WicksStatus wicks_genus(const struct WicksOracle *o,
                             const char *const *words,
                             uintptr_t count,
                             int64_t *out_genus);

/**
 * A conjugator `w` with `h1 = w h2 w^-1` within the bound for `m`, or a
 * null string when none exists.
 *
 * # Safety
 * `h1` and `h2` must be NUL-terminated strings and `out_conjugator` a valid
 * pointer.
 */
enum WicksStatus wicks_conjugate(const struct WicksOracle *o,
                                 const char *h1,
                                 const char *h2,
                                 uint64_t m,
                                 char **out_conjugator);

/**
 * Runs the command-line driver on `argv` (without the program name).
 * The certificate or diagnostics are written to `out_text` and the exit
 * code to `out_code`.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; the out-pointers must
 * be valid.
 */
enum WicksStatus wicks_run(const char *const *argv,
                           uintptr_t argc,
                           int32_t *out_code,
                           char **out_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WICKS_H */
