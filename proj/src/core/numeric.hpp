#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core/superfun.hpp"

namespace superkilling {

/// Element of the finite exterior algebra on k generators with double
/// coefficients, indexed by generator subsets. Faithful numeric model of
/// SuperFunction arithmetic at a fixed even-coordinate point.
class NumericSuperValue {
 public:
  NumericSuperValue() = default;
  explicit NumericSuperValue(int gens) : gens_(gens), c_(std::size_t{1} << gens, 0.0) {}
  static NumericSuperValue constant(int gens, double v);
  static NumericSuperValue generator(int gens, int k);

  int gens() const { return gens_; }
  double at(OddMask subset) const { return c_[subset]; }
  double& at(OddMask subset) { return c_[subset]; }
  double body() const { return c_.empty() ? 0.0 : c_[0]; }
  const std::vector<double>& coeffs() const { return c_; }

  NumericSuperValue operator+(const NumericSuperValue& o) const;
  NumericSuperValue operator-(const NumericSuperValue& o) const;
  NumericSuperValue operator*(const NumericSuperValue& o) const;
  NumericSuperValue operator-() const;
  NumericSuperValue scale(double v) const;
  /// Inverse via the nilpotent series; requires |body| above threshold.
  NumericSuperValue invert() const;

  double max_abs() const;

 private:
  int gens_ = 0;
  std::vector<double> c_{0.0};
};

/// Assignment of double values to the even coordinates of a chart.
struct EvalPoint {
  std::map<GenId, double> values;
};

/// Evaluate coefficients at the point and place them on their subsets;
/// nullopt when some coefficient hits a pole or domain edge.
std::optional<NumericSuperValue> eval_numeric(const SuperFunction& f,
                                              const EvalPoint& p);

struct SamplingOptions {
  std::uint64_t seed = 42;
  int samples = 32;
  double tolerance = 1e-9;   // zero threshold
  double strong = 1e-6;      // clear-nonzero threshold
  int widen_rounds = 2;
  bool cross_check = false;  // numerically re-verify symbolic verdicts
};

class Sampler {
 public:
  Sampler(ChartPtr chart, std::uint64_t seed, double widen = 1.0);
  EvalPoint draw();

 private:
  ChartPtr chart_;
  std::mt19937_64 rng_;
  double widen_;
};

enum class Verdict { Zero, Nonzero };
enum class Method { Symbolic, Numeric };

struct ZeroCheck {
  Verdict verdict;
  Method method;
  double max_abs = 0.0;
  std::string witness;  // printable nonzero witness, empty when zero
};

/// Combined symbolic/numeric zero test of a superfunction.
/// Exact on rational coefficients; numeric sampling otherwise. With
/// cross_check set, a symbolic verdict that numeric evaluation
/// contradicts raises DisagreementError instead of being resolved.
ZeroCheck check_zero(const SuperFunction& f, const SamplingOptions& opts);

}  // namespace superkilling
