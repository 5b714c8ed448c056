#pragma once

#include <string>
#include <vector>

#include "core/dsl.hpp"

namespace superkilling {

struct RunOptions {
  std::uint64_t seed = 42;
  int samples = 32;
  double tolerance = 1e-9;
  bool parallel = false;
};

struct CheckResult {
  std::string display;
  int line = 0;
  std::string verdict;   // pass | numeric-pass | fail | error
  std::string expected;  // pass | fail | error
  bool ok = false;       // verdict matches the expectation
  bool internal_error = false;  // symbolic/numeric disagreement
  std::vector<std::string> witnesses;
  std::vector<std::string> notes;
  double ms = 0.0;
};

struct Report {
  std::string source_name;
  RunOptions options;
  std::vector<CheckResult> results;

  /// 0 all pass, 1 any check failed, 3 symbolic/numeric disagreement.
  int exit_code() const;
  std::string to_text() const;
  std::string to_json() const;
};

Report run_checks(const Document& doc, const RunOptions& options,
                  const std::string& source_name = "");

/// Validate a structure-constant instance: Jacobi via the homological
/// field, the algebraic Killing condition, and the trace condition.
Report run_liealg(const LieAlgebraData& data, const RunOptions& options,
                  const std::string& source_name = "");

}  // namespace superkilling
