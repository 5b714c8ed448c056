/* superkilling C API: symbolic verification of homological and Killing
 * structures on coordinate charts of supermanifolds.
 *
 * All functions are thread-safe. Objects returned through out-parameters
 * are owned by the caller and released with the matching *_free function.
 * Strings returned by sk_report_* accessors stay valid until the report
 * is freed; strings returned as char* must be released with
 * sk_string_free.
 */
#ifndef SUPERKILLING_H
#define SUPERKILLING_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sk_status {
  SK_OK = 0,                  /* all checks in their expected state */
  SK_CHECK_FAILED = 1,        /* at least one check failed */
  SK_PARSE_ERROR = 2,         /* syntax or validation error in the input */
  SK_INTERNAL_DISAGREEMENT = 3, /* symbolic and numeric verdicts conflict */
  SK_IO_ERROR = 4,
  SK_INVALID_ARGUMENT = 5
} sk_status;

typedef enum sk_verdict {
  SK_VERDICT_PASS = 0,
  SK_VERDICT_NUMERIC_PASS = 1,
  SK_VERDICT_FAIL = 2,
  SK_VERDICT_ERROR = 3
} sk_verdict;

typedef struct sk_options {
  uint64_t seed;    /* RNG seed for numeric sampling (default 42) */
  int samples;      /* sample points per zero test (default 32) */
  double tolerance; /* numeric zero threshold (default 1e-9) */
  int parallel;     /* nonzero: run independent checks concurrently */
} sk_options;

void sk_options_default(sk_options* opts);

const char* sk_version(void);

/* Opaque handle for the result of running a definition file or a
 * structure-constant instance. */
typedef struct sk_report sk_report;

/* Parse and run a definition file given as text. `name` labels the
 * report (may be NULL). Always produces a report unless the input fails
 * to parse, in which case *out is NULL and the parse diagnostic is
 * available via sk_last_error. Returns the exit status. */
sk_status sk_check_source(const char* source, const char* name,
                          const sk_options* opts, sk_report** out);
sk_status sk_check_file(const char* path, const sk_options* opts,
                        sk_report** out);

/* Structure-constant mode: JSON {"dim": n, "structure": [[c,b,a,v]...],
 * "form": [[b,a,v]...]} with 1-based indices. */
sk_status sk_liealg_source(const char* json_text, const char* name,
                           const sk_options* opts, sk_report** out);
sk_status sk_liealg_file(const char* path, const sk_options* opts,
                         sk_report** out);

/* Diagnostic for the most recent failed call on this thread. */
const char* sk_last_error(void);

int sk_report_exit_code(const sk_report* r);
size_t sk_report_entry_count(const sk_report* r);
const char* sk_report_entry_name(const sk_report* r, size_t i);
sk_verdict sk_report_entry_verdict(const sk_report* r, size_t i);
/* Expectation recorded in the file: "pass", "fail" or "error". */
const char* sk_report_entry_expected(const sk_report* r, size_t i);
/* Nonzero when the verdict matches the expectation. */
int sk_report_entry_ok(const sk_report* r, size_t i);
/* Witnesses and notes, newline-separated; empty string when none. */
const char* sk_report_entry_detail(const sk_report* r, size_t i);

/* Renderings; release with sk_string_free. */
char* sk_report_to_text(const sk_report* r);
char* sk_report_to_json(const sk_report* r);

void sk_report_free(sk_report* r);
void sk_string_free(char* s);

/* Bundled examples. Kind is "check" (definition file) or "liealg"
 * (structure-constant JSON). */
int sk_fixture_count(void);
const char* sk_fixture_name(int i);
const char* sk_fixture_title(int i);
const char* sk_fixture_kind(int i);
const char* sk_fixture_source(int i);

#ifdef __cplusplus
}
#endif

#endif /* SUPERKILLING_H */
