#include "superkilling.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/fixtures.hpp"
#include "core/runner.hpp"

using namespace superkilling;

struct sk_report {
  Report report;
  // Cached per-entry detail strings so accessors can hand out stable
  // const char* pointers.
  std::vector<std::string> details;
};

namespace {

thread_local std::string g_last_error;

RunOptions to_run_options(const sk_options* opts) {
  RunOptions r;
  if (opts) {
    r.seed = opts->seed;
    r.samples = opts->samples > 0 ? opts->samples : 32;
    r.tolerance = opts->tolerance > 0 ? opts->tolerance : 1e-9;
    r.parallel = opts->parallel != 0;
  }
  return r;
}

sk_report* wrap(Report&& rep) {
  auto* r = new sk_report{std::move(rep), {}};
  for (const CheckResult& c : r->report.results) {
    std::string d;
    for (const auto& n : c.notes) {
      if (!d.empty()) d += "\n";
      d += n;
    }
    for (const auto& w : c.witnesses) {
      if (!d.empty()) d += "\n";
      d += "witness: " + w;
    }
    r->details.push_back(std::move(d));
  }
  return r;
}

sk_status status_of(const Report& rep) {
  switch (rep.exit_code()) {
    case 0: return SK_OK;
    case 1: return SK_CHECK_FAILED;
    case 3: return SK_INTERNAL_DISAGREEMENT;
    default: return SK_CHECK_FAILED;
  }
}

bool read_file(const char* path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

void sk_options_default(sk_options* opts) {
  if (!opts) return;
  opts->seed = 42;
  opts->samples = 32;
  opts->tolerance = 1e-9;
  opts->parallel = 0;
}

const char* sk_version(void) { return "1.0.0"; }

const char* sk_last_error(void) { return g_last_error.c_str(); }

sk_status sk_check_source(const char* source, const char* name,
                          const sk_options* opts, sk_report** out) {
  if (out) *out = nullptr;
  if (!source || !out) {
    g_last_error = "null argument";
    return SK_INVALID_ARGUMENT;
  }
  try {
    Document doc = parse(source);
    Report rep =
        run_checks(doc, to_run_options(opts), name ? name : "<source>");
    *out = wrap(std::move(rep));
    return status_of((*out)->report);
  } catch (const ParseError& e) {
    std::ostringstream ss;
    ss << "parse error at line " << e.line << ", column " << e.column << ": "
       << e.what();
    g_last_error = ss.str();
    return SK_PARSE_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SK_PARSE_ERROR;
  }
}

sk_status sk_check_file(const char* path, const sk_options* opts,
                        sk_report** out) {
  if (out) *out = nullptr;
  if (!path || !out) {
    g_last_error = "null argument";
    return SK_INVALID_ARGUMENT;
  }
  std::string text;
  if (!read_file(path, text)) {
    g_last_error = std::string("cannot read '") + path + "'";
    return SK_IO_ERROR;
  }
  return sk_check_source(text.c_str(), path, opts, out);
}

sk_status sk_liealg_source(const char* json_text, const char* name,
                           const sk_options* opts, sk_report** out) {
  if (out) *out = nullptr;
  if (!json_text || !out) {
    g_last_error = "null argument";
    return SK_INVALID_ARGUMENT;
  }
  try {
    LieAlgebraData data = liealg_from_json(json_text);
    Report rep =
        run_liealg(data, to_run_options(opts), name ? name : "<json>");
    *out = wrap(std::move(rep));
    return status_of((*out)->report);
  } catch (const ParseError& e) {
    g_last_error = e.what();
    return SK_PARSE_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SK_PARSE_ERROR;
  }
}

sk_status sk_liealg_file(const char* path, const sk_options* opts,
                         sk_report** out) {
  if (out) *out = nullptr;
  if (!path || !out) {
    g_last_error = "null argument";
    return SK_INVALID_ARGUMENT;
  }
  std::string text;
  if (!read_file(path, text)) {
    g_last_error = std::string("cannot read '") + path + "'";
    return SK_IO_ERROR;
  }
  return sk_liealg_source(text.c_str(), path, opts, out);
}

int sk_report_exit_code(const sk_report* r) {
  return r ? r->report.exit_code() : SK_INVALID_ARGUMENT;
}

size_t sk_report_entry_count(const sk_report* r) {
  return r ? r->report.results.size() : 0;
}

const char* sk_report_entry_name(const sk_report* r, size_t i) {
  if (!r || i >= r->report.results.size()) return "";
  return r->report.results[i].display.c_str();
}

sk_verdict sk_report_entry_verdict(const sk_report* r, size_t i) {
  if (!r || i >= r->report.results.size()) return SK_VERDICT_ERROR;
  const std::string& v = r->report.results[i].verdict;
  if (v == "pass") return SK_VERDICT_PASS;
  if (v == "numeric-pass") return SK_VERDICT_NUMERIC_PASS;
  if (v == "fail") return SK_VERDICT_FAIL;
  return SK_VERDICT_ERROR;
}

const char* sk_report_entry_expected(const sk_report* r, size_t i) {
  if (!r || i >= r->report.results.size()) return "";
  return r->report.results[i].expected.c_str();
}

int sk_report_entry_ok(const sk_report* r, size_t i) {
  if (!r || i >= r->report.results.size()) return 0;
  return r->report.results[i].ok ? 1 : 0;
}

const char* sk_report_entry_detail(const sk_report* r, size_t i) {
  if (!r || i >= r->details.size()) return "";
  return r->details[i].c_str();
}

char* sk_report_to_text(const sk_report* r) {
  return dup_string(r ? r->report.to_text() : "");
}

char* sk_report_to_json(const sk_report* r) {
  return dup_string(r ? r->report.to_json() : "{}");
}

void sk_report_free(sk_report* r) { delete r; }

void sk_string_free(char* s) { delete[] s; }

int sk_fixture_count(void) { return static_cast<int>(fixtures().size()); }

const char* sk_fixture_name(int i) {
  const auto& fs = fixtures();
  return i >= 0 && i < static_cast<int>(fs.size()) ? fs[i].name : "";
}

const char* sk_fixture_title(int i) {
  const auto& fs = fixtures();
  return i >= 0 && i < static_cast<int>(fs.size()) ? fs[i].title : "";
}

const char* sk_fixture_kind(int i) {
  const auto& fs = fixtures();
  return i >= 0 && i < static_cast<int>(fs.size()) ? fs[i].kind : "";
}

const char* sk_fixture_source(int i) {
  const auto& fs = fixtures();
  return i >= 0 && i < static_cast<int>(fs.size()) ? fs[i].source : "";
}

}  // extern "C"
