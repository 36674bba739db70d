#ifndef RQE_LADDER_H
#define RQE_LADDER_H

/* Generated by cbindgen from rqe-ladder-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Corpus encodings accepted by [`rqel_corpus_load`].
typedef enum RqelFormat {
  RQEL_FORMAT_CSV = 0,
  RQEL_FORMAT_JSON = 1,
} RqelFormat;

// Status codes returned by every fallible entry point.
typedef enum RqelStatus {
  RQEL_STATUS_OK = 0,
  // A required pointer argument was null.
  RQEL_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  RQEL_STATUS_INVALID_UTF8 = 2,
  // Reading or writing a file failed.
  RQEL_STATUS_IO = 3,
  // Input text did not parse.
  RQEL_STATUS_PARSE = 4,
  // Parsed input failed validation.
  RQEL_STATUS_VALIDATION = 5,
  // Evaluation had nothing to compare.
  RQEL_STATUS_EVAL = 6,
} RqelStatus;

// Opaque validated measurement corpus.
typedef struct RqelCorpus RqelCorpus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *rqel_version(void);

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread; do not free.
const char *rqel_last_error(void);

// Release a string returned by this library.
//
// # Safety
// `s` must be a pointer previously returned through an `out_json`/string
// out-parameter of this library, not yet freed; null is a no-op.
void rqel_string_free(char *s);

// Load and validate a corpus file. On success writes a new handle to
// `out_corpus`; release it with [`rqel_corpus_free`].
//
// # Safety
// `path` must point to a NUL-terminated string and `out_corpus` to a valid
// pointer slot.
enum RqelStatus rqel_corpus_load(const char *path,
                                 enum RqelFormat format,
                                 struct RqelCorpus **out_corpus);

// Generate a corpus from a synthesis spec JSON (pass null or "" for the
// built-in default spec).
//
// # Safety
// `out_corpus` must point to a valid pointer slot; `spec_json`, when
// non-null, must be NUL-terminated.
enum RqelStatus rqel_corpus_synth(const char *spec_json, struct RqelCorpus **out_corpus);

// Destroy a corpus handle; null is a no-op.
//
// # Safety
// `corpus` must be a handle from this library, not yet freed.
void rqel_corpus_free(struct RqelCorpus *corpus);

// Number of sequences in the corpus; 0 for a null handle.
//
// # Safety
// `corpus`, when non-null, must be a live handle from this library.
size_t rqel_corpus_sequence_count(const struct RqelCorpus *corpus);

// Write the corpus as CSV to `path`.
//
// # Safety
// `corpus` must be a live handle; `path` must be NUL-terminated.
enum RqelStatus rqel_corpus_write_csv(const struct RqelCorpus *corpus, const char *path);

// Per-resolution summary statistics as a JSON string.
//
// # Safety
// `corpus` must be a live handle; `out_json` must point to a valid slot.
enum RqelStatus rqel_corpus_summary_json(const struct RqelCorpus *corpus, char **out_json);

// Analyze one sequence and return its four ladders as a JSON object
// `{"sequence_id": ..., "ladders": [...]}`. `options_json`, when non-null
// and non-empty, carries `{"step": ..., "ladder": {...}, "jobs": ...}`.
//
// # Safety
// `corpus` must be a live handle; `sequence_id` NUL-terminated; `out_json`
// a valid slot.
enum RqelStatus rqel_sequence_ladders_json(const struct RqelCorpus *corpus,
                                           const char *sequence_id,
                                           const char *options_json,
                                           char **out_json);

// Run the full pipeline over the corpus and return the evaluation report
// JSON (per-sequence and aggregate relative differences).
//
// # Safety
// `corpus` must be a live handle; `out_json` a valid slot.
enum RqelStatus rqel_corpus_eval_json(const struct RqelCorpus *corpus,
                                      const char *options_json,
                                      char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RQE_LADDER_H */
