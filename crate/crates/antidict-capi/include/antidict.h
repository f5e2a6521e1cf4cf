#ifndef ANTIDICT_H
#define ANTIDICT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call. Everything except `ANTIDICT_STATUS_OK` leaves a
// message readable through `antidict_last_error_message`.
typedef enum AntidictStatus {
  ANTIDICT_STATUS_OK = 0,
  // A required pointer argument was null.
  ANTIDICT_STATUS_NULL_ARGUMENT = 1,
  // The input is not a word over {a, b}, or its period is empty or a
  // proper power.
  ANTIDICT_STATUS_INVALID_WORD = 2,
  // A structurally invalid forbidden system or index system.
  ANTIDICT_STATUS_INVALID_SYSTEM = 3,
  // The request exceeds a library budget cap.
  ANTIDICT_STATUS_BUDGET = 4,
  // The computation ran but a verified claim failed.
  ANTIDICT_STATUS_CHECK_FAILED = 5,
  // Invariant breakage inside the library.
  ANTIDICT_STATUS_INTERNAL = 6,
} AntidictStatus;

// Opaque handle for a primitive periodic word.
typedef struct AntidictWord AntidictWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message for the most recent failure on this thread. Valid until the
// next failing call; never null.
const char *antidict_last_error_message(void);

// Releases a string returned by this library. Null is allowed.
//
// # Safety
// `text` must have been returned by this library and not yet freed.
void antidict_string_free(char *text);

// Parses a period over {a, b} into a word handle.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum AntidictStatus antidict_word_parse(const char *text, struct AntidictWord **out);

// Releases a word handle. Null is allowed.
//
// # Safety
// `word` must have come from [`antidict_word_parse`] and not yet be freed.
void antidict_word_free(struct AntidictWord *word);

// Period length of the word.
//
// # Safety
// `word` must be a live handle from [`antidict_word_parse`] or null.
size_t antidict_word_period_len(const struct AntidictWord *word);

// Canonical forbidden system of the word as a JSON array of strings, sorted
// shortlex.
//
// # Safety
// `word` must be a live handle and `out` a valid pointer.
enum AntidictStatus antidict_canonical_json(const struct AntidictWord *word, char **out);

// Classified fork table of the word as JSON, plus the full verification
// report of the significance calculus. `ANTIDICT_STATUS_CHECK_FAILED` (with
// the JSON still written) when any clause fails.
//
// # Safety
// `word` must be a live handle and `out` a valid pointer.
enum AntidictStatus antidict_forks_json(const struct AntidictWord *word, char **out);

// Decides whether the words (array of `len` C strings) pin down a unique
// periodic word. JSON: `{"outcome": "defines", "word": "aab"}`,
// `{"outcome": "no-word"}` or
// `{"outcome": "multiple", "first": ..., "second": ...}`.
//
// # Safety
// `words` must point to `len` valid NUL-terminated strings; `out` must be a
// valid pointer.
enum AntidictStatus antidict_defines_json(const char *const *words, size_t len, char **out);

// Verifies generation `i ≥ 1` of the extremal family; JSON report as in the
// library. `ANTIDICT_STATUS_CHECK_FAILED` if the generation misses the
// bound (JSON still written).
//
// # Safety
// `out` must be a valid pointer.
enum AntidictStatus antidict_extremal_json(size_t i, char **out);

// Enumerates all index systems of size `n` and reports the maximum of the
// generated sequence against `F(n+1)`; JSON report as in the library.
//
// # Safety
// `out` must be a valid pointer.
enum AntidictStatus antidict_systems_json(size_t n, char **out);

// Sweeps every primitive period up to `max_len`. `checks_csv` is a
// comma-separated list of check names, or null for all checks. JSON report
// as in the library; `ANTIDICT_STATUS_CHECK_FAILED` when the sweep found
// violations (JSON still written).
//
// # Safety
// `checks_csv` must be a valid NUL-terminated string or null; `out` must be
// a valid pointer.
enum AntidictStatus antidict_sweep_json(size_t max_len, const char *checks_csv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANTIDICT_H */
