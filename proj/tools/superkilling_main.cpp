// Command-line front end; talks to the kernel exclusively through the
// C API in superkilling.h.

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "superkilling.h"

namespace {

int emit_report(sk_report* report, bool json) {
  char* text = json ? sk_report_to_json(report) : sk_report_to_text(report);
  std::fputs(text, stdout);
  if (!json) std::fputc('\n', stdout);
  sk_string_free(text);
  int code = sk_report_exit_code(report);
  sk_report_free(report);
  return code;
}

/// `fixture:NAME` arguments load a bundled example instead of a file.
const char* resolve_fixture(const std::string& arg, const char* want_kind) {
  const std::string prefix = "fixture:";
  if (arg.rfind(prefix, 0) != 0) return nullptr;
  std::string name = arg.substr(prefix.size());
  for (int i = 0; i < sk_fixture_count(); ++i) {
    if (name == sk_fixture_name(i)) {
      if (std::string(sk_fixture_kind(i)) != want_kind) {
        std::fprintf(stderr, "fixture '%s' is of kind %s, not %s\n",
                     name.c_str(), sk_fixture_kind(i), want_kind);
        std::exit(SK_INVALID_ARGUMENT);
      }
      return sk_fixture_source(i);
    }
  }
  std::fprintf(stderr, "unknown fixture '%s'\n", name.c_str());
  std::exit(SK_INVALID_ARGUMENT);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic checks for metrics and homological vector fields "
               "on coordinate charts"};
  app.require_subcommand(1);

  sk_options opts;
  sk_options_default(&opts);
  bool json = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", json, "emit a machine-readable report");
    cmd->add_option("--seed", opts.seed, "RNG seed for numeric sampling");
    cmd->add_option("--samples", opts.samples,
                    "sample points per numeric zero test");
    cmd->add_option("--tol", opts.tolerance, "numeric zero tolerance");
  };

  std::string file;
  CLI::App* check = app.add_subcommand(
      "check", "run the checks of a definition file (or fixture:NAME)");
  check->add_option("FILE", file, "definition file")->required();
  add_common(check);
  bool parallel = false;
  check->add_flag("--parallel", parallel,
                  "run independent checks concurrently");

  std::string liealg_file;
  CLI::App* liealg = app.add_subcommand(
      "liealg", "validate a structure-constant JSON file (or fixture:NAME)");
  liealg->add_option("FILE", liealg_file, "JSON input")->required();
  add_common(liealg);

  CLI::App* fixtures_cmd =
      app.add_subcommand("fixtures", "list the bundled examples");
  std::string dump_name;
  fixtures_cmd->add_option("--dump", dump_name,
                           "print the source of one fixture and exit");

  CLI11_PARSE(app, argc, argv);

  if (fixtures_cmd->parsed()) {
    if (!dump_name.empty()) {
      for (int i = 0; i < sk_fixture_count(); ++i) {
        if (dump_name == sk_fixture_name(i)) {
          std::fputs(sk_fixture_source(i), stdout);
          return 0;
        }
      }
      std::fprintf(stderr, "unknown fixture '%s'\n", dump_name.c_str());
      return SK_INVALID_ARGUMENT;
    }
    for (int i = 0; i < sk_fixture_count(); ++i)
      std::printf("%-24s [%s]  %s\n", sk_fixture_name(i), sk_fixture_kind(i),
                  sk_fixture_title(i));
    return 0;
  }

  sk_report* report = nullptr;
  sk_status status = SK_INVALID_ARGUMENT;
  if (check->parsed()) {
    opts.parallel = parallel ? 1 : 0;
    if (const char* src = resolve_fixture(file, "check"))
      status = sk_check_source(src, file.c_str(), &opts, &report);
    else
      status = sk_check_file(file.c_str(), &opts, &report);
  } else if (liealg->parsed()) {
    if (const char* src = resolve_fixture(liealg_file, "liealg"))
      status = sk_liealg_source(src, liealg_file.c_str(), &opts, &report);
    else
      status = sk_liealg_file(liealg_file.c_str(), &opts, &report);
  }

  if (!report) {
    std::fprintf(stderr, "error: %s\n", sk_last_error());
    return status;
  }
  return emit_report(report, json);
}
