#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/berezin.hpp"
#include "core/liealg.hpp"

namespace superkilling {

/// One check directive of a definition file.
struct Directive {
  enum class Kind {
    Homological,
    Killing,
    RiemannianQ,
    Divergence,
    Modular,
    Unimodular,
    Shander,
    Morphism,
    LiealgKilling,
    LiealgTrace,
  };
  enum class Expect { Pass, Fail, Error };

  Kind kind;
  std::vector<std::string> args;
  std::optional<SuperFunction> expected_value;  // right side of ==
  Expect expect = Expect::Pass;
  int line = 0;
  std::string display;
};

const char* directive_name(Directive::Kind k);

/// Parsed and fully resolved definition file: every named object is
/// constructed and validated, every reference resolves.
struct Document {
  std::vector<std::pair<std::string, ChartPtr>> charts;
  std::vector<std::pair<std::string, MetricTensor>> metrics;
  std::vector<std::pair<std::string, VectorField>> vectors;
  std::vector<std::pair<std::string, BerezinVolume>> volumes;
  std::vector<std::pair<std::string, CoordinateChange>> changes;
  std::vector<std::pair<std::string, LieAlgebraData>> liealgs;
  std::vector<Directive> checks;

  const ChartPtr* find_chart(const std::string& name) const;
  const MetricTensor* find_metric(const std::string& name) const;
  const VectorField* find_vector(const std::string& name) const;
  const BerezinVolume* find_volume(const std::string& name) const;
  const CoordinateChange* find_change(const std::string& name) const;
  const LieAlgebraData* find_liealg(const std::string& name) const;
};

/// Parse a definition file. Throws ParseError with line/column on syntax
/// errors, unresolved references, duplicate names, or parity mismatches.
Document parse(const std::string& source);

/// Canonical DSL emission; parse(print(doc)) reproduces the document.
std::string print(const Document& doc);

/// Structural equality (charts by content, components by value).
bool equivalent(const Document& a, const Document& b);

/// Lie algebra data from the JSON side format:
/// {"dim": n, "structure": [[c,b,a,value]...], "form": [[b,a,value]...]}
/// with 1-based indices; values are numbers or "p/q" strings.
LieAlgebraData liealg_from_json(const std::string& json_text);

}  // namespace superkilling
