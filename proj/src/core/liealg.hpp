#pragma once

#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace superkilling {

/// A finite-dimensional Lie algebra candidate given by structure
/// constants q[c][b][a] (antisymmetric in b,a) together with an
/// antisymmetric nondegenerate bilinear form; the raw material for a
/// homological field on the parity-shifted algebra.
class LieAlgebraData {
 public:
  LieAlgebraData(std::size_t dim, std::vector<Rational> structure,
                 std::vector<Rational> form);

  std::size_t dim() const { return dim_; }
  const Rational& q(std::size_t c, std::size_t b, std::size_t a) const {
    return structure_[(c * dim_ + b) * dim_ + a];
  }
  const Rational& form(std::size_t b, std::size_t a) const {
    return form_[b * dim_ + a];
  }

 private:
  std::size_t dim_;
  std::vector<Rational> structure_;  // dim^3, q[c][b][a]
  std::vector<Rational> form_;       // dim^2
};

/// Purely odd chart with one generator per basis vector, plus the
/// quadratic odd field (1/2) xi^a xi^b q^c_{ba} d/dxi^c.
struct OddRealization {
  ChartPtr chart;
  VectorField field;
};

OddRealization build_homological(const LieAlgebraData& l);

/// The form as a metric on the odd chart.
MetricTensor form_metric(const LieAlgebraData& l, const ChartPtr& chart);

struct AlgebraicVerdict {
  bool pass = true;
  std::vector<std::string> witnesses;
};

/// q^c_{da} g_{cb} - q^c_{db} g_{ca} = 0 over all (d, a, b).
AlgebraicVerdict check_algebraic_killing(const LieAlgebraData& l);

/// q^a_{da} = 0 for each d (classical unimodularity).
AlgebraicVerdict check_unimodular_trace(const LieAlgebraData& l);

/// Classical Jacobi identity by brute force over all index triples.
AlgebraicVerdict check_jacobi(const LieAlgebraData& l);

/// One record per instance visited by the small-instance search.
struct SearchRecord {
  LieAlgebraData data;
  bool jacobi;
  bool killing;
  bool trace;
};

struct SearchOutcome {
  std::size_t total = 0;
  std::size_t jacobi_pass = 0;
  std::size_t killing_pass = 0;        // among Jacobi instances
  std::size_t trace_pass = 0;          // among Jacobi instances
  std::size_t killing_not_trace = 0;   // counterexamples; must stay 0
  std::size_t trace_not_killing = 0;   // unimodular but not algebraic-Killing
  std::vector<SearchRecord> killing_fixtures;   // Jacobi + Killing instances
  std::vector<SearchRecord> separating_fixtures; // trace pass, Killing fail
};

/// Enumerate small instances with coefficients in {-1,0,1}: full
/// enumeration in dimension 2; in dimension 4, all structures with at
/// most max_nonzero nonzero independent entries against a standard
/// symplectic form.
SearchOutcome search_small_instances(std::size_t max_nonzero = 2);

}  // namespace superkilling
