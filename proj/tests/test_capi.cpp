// Black-box exercise of the shared-library surface: only superkilling.h.
#include "superkilling.h"

#include <assert.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      ++failures;                                                      \
      fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
    }                                                                  \
  } while (0)

static const char* fixture_source(const char* name) {
  for (int i = 0; i < sk_fixture_count(); ++i)
    if (strcmp(sk_fixture_name(i), name) == 0) return sk_fixture_source(i);
  return NULL;
}

int main(void) {
  EXPECT(strcmp(sk_version(), "1.0.0") == 0);

  sk_options opts;
  sk_options_default(&opts);
  EXPECT(opts.seed == 42);
  EXPECT(opts.samples == 32);

  /* fixtures are enumerable and non-empty */
  EXPECT(sk_fixture_count() >= 7);
  for (int i = 0; i < sk_fixture_count(); ++i) {
    EXPECT(strlen(sk_fixture_name(i)) > 0);
    EXPECT(strlen(sk_fixture_title(i)) > 0);
    EXPECT(strlen(sk_fixture_source(i)) > 0);
  }

  /* a clean run */
  {
    const char* src = fixture_source("euclidean_superspace");
    EXPECT(src != NULL);
    sk_report* rep = NULL;
    sk_status st = sk_check_source(src, "euclid", &opts, &rep);
    EXPECT(st == SK_OK);
    EXPECT(rep != NULL);
    EXPECT(sk_report_exit_code(rep) == 0);
    EXPECT(sk_report_entry_count(rep) == 3);
    EXPECT(sk_report_entry_verdict(rep, 0) == SK_VERDICT_PASS);
    EXPECT(sk_report_entry_ok(rep, 2));
    EXPECT(strstr(sk_report_entry_name(rep, 2), "unimodular") != NULL);
    EXPECT(strstr(sk_report_entry_detail(rep, 2), "rho") != NULL);
    char* text = sk_report_to_text(rep);
    EXPECT(strstr(text, "unimodular") != NULL);
    sk_string_free(text);
    char* json = sk_report_to_json(rep);
    EXPECT(strstr(json, "\"exit_code\": 0") != NULL);
    sk_string_free(json);
    sk_report_free(rep);
  }

  /* expected failures keep exit code zero; unexpected ones do not */
  {
    sk_report* rep = NULL;
    sk_status st = sk_check_source(
        "chart M { even: t; odd: a, b; }\n"
        "metric g on M = (dt*dt + 2*da*db) / t^2;\n"
        "vector T on M (even) = d_t;\n"
        "check killing(g, T);\n",
        "bad", &opts, &rep);
    EXPECT(st == SK_CHECK_FAILED);
    EXPECT(rep != NULL);
    EXPECT(sk_report_exit_code(rep) == 1);
    EXPECT(sk_report_entry_verdict(rep, 0) == SK_VERDICT_FAIL);
    EXPECT(!sk_report_entry_ok(rep, 0));
    sk_report_free(rep);
  }

  /* parse errors: no report, diagnostic with position */
  {
    sk_report* rep = NULL;
    sk_status st = sk_check_source("vector X on M = d_t", "broken", &opts, &rep);
    EXPECT(st == SK_PARSE_ERROR);
    EXPECT(rep == NULL);
    EXPECT(strstr(sk_last_error(), "line") != NULL);
  }

  /* structure-constant mode */
  {
    const char* src = fixture_source("liealg_2d");
    EXPECT(src != NULL);
    sk_report* rep = NULL;
    sk_status st = sk_liealg_source(src, "lie", &opts, &rep);
    EXPECT(st == SK_CHECK_FAILED); /* the algebra is not unimodular */
    EXPECT(rep != NULL);
    EXPECT(sk_report_entry_count(rep) == 3);
    EXPECT(sk_report_entry_verdict(rep, 0) == SK_VERDICT_PASS);
    EXPECT(sk_report_entry_verdict(rep, 1) == SK_VERDICT_FAIL);
    sk_report_free(rep);
  }

  /* argument validation */
  {
    sk_report* rep = NULL;
    EXPECT(sk_check_source(NULL, NULL, &opts, &rep) == SK_INVALID_ARGUMENT);
    EXPECT(sk_check_file("/nonexistent/definitely.sk", &opts, &rep) ==
           SK_IO_ERROR);
  }

  if (failures == 0) printf("capi_tests: all assertions passed\n");
  return failures == 0 ? 0 : 1;
}
