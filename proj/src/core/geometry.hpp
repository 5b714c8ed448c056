#pragma once

#include <vector>

#include "core/coordchange.hpp"
#include "core/numeric.hpp"
#include "core/supermatrix.hpp"

namespace superkilling {

/// Parity-homogeneous vector field X = X^a d/dx^a; component X^a has
/// parity p(X) + p(a).
class VectorField {
 public:
  VectorField(ChartPtr chart, Parity parity,
              std::vector<SuperFunction> components);
  static VectorField zero(ChartPtr chart, Parity parity);
  static VectorField coordinate(ChartPtr chart, std::size_t coord);

  const ChartPtr& chart() const { return chart_; }
  Parity parity() const { return parity_; }
  const SuperFunction& component(std::size_t a) const { return comps_[a]; }
  const std::vector<SuperFunction>& components() const { return comps_; }

  /// X(f) = X^a partial_a f.
  SuperFunction apply(const SuperFunction& f) const;

 private:
  ChartPtr chart_;
  Parity parity_;
  std::vector<SuperFunction> comps_;
};

/// Rank-2 symmetric covariant tensor by components T_{ba} with the graded
/// symmetry T_{ab} = (-1)^{p(a)p(b)} T_{ba}. Stored row-major with the
/// first index the left subscript.
class SymTensor2 {
 public:
  SymTensor2(ChartPtr chart, Parity parity,
             std::vector<SuperFunction> components);

  const ChartPtr& chart() const { return chart_; }
  Parity parity() const { return parity_; }
  std::size_t dim() const { return chart_->dim(); }
  const SuperFunction& at(std::size_t b, std::size_t a) const {
    return comps_[b * dim() + a];
  }
  const std::vector<SuperFunction>& components() const { return comps_; }

 private:
  ChartPtr chart_;
  Parity parity_;
  std::vector<SuperFunction> comps_;
};

/// Even Riemannian metric by components g_{ba}; even, graded symmetric,
/// Berezinian body invertible (which forces an even number of odd
/// coordinates).
class MetricTensor {
 public:
  MetricTensor(ChartPtr chart, std::vector<SuperFunction> components);

  const ChartPtr& chart() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  const SuperFunction& at(std::size_t b, std::size_t a) const {
    return comps_[b * dim() + a];
  }
  const std::vector<SuperFunction>& components() const { return comps_; }

  /// Components as a supermatrix, entry (b,a) = g_{ba}.
  SuperMatrix matrix() const;

 private:
  ChartPtr chart_;
  std::vector<SuperFunction> comps_;
};

/// g^{ab} with g^{ac} g_{cb} = delta^a_b.
class InverseMetric {
 public:
  InverseMetric(ChartPtr chart, std::vector<SuperFunction> components);
  const ChartPtr& chart() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  const SuperFunction& at(std::size_t a, std::size_t b) const {
    return comps_[a * dim() + b];
  }

 private:
  ChartPtr chart_;
  std::vector<SuperFunction> comps_;
};

/// Zero verdicts for a family of component expressions, with printable
/// witnesses for the nonzero ones.
struct ComponentVerdicts {
  bool all_zero = true;
  Method method = Method::Symbolic;  // worst method over components
  std::vector<std::string> witnesses;

  void absorb(const std::string& label, const ZeroCheck& check);
};

// ------------------------------------------------------------- operations

/// [X,Y]^b = X^a d_a Y^b - (-1)^{p(X)p(Y)} Y^a d_a X^b.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Q odd with Q^a d_a Q^b = 0 componentwise; rejects even input.
ComponentVerdicts is_homological(const VectorField& q,
                                 const SamplingOptions& opts);

/// <X|Y>_g = (-1)^{p(Y)p(a)} X^a Y^b g_{ba}.
SuperFunction pairing(const MetricTensor& g, const VectorField& x,
                      const VectorField& y);

/// (L_X g)_{ba} by the displayed local expression.
SymTensor2 lie_derivative_metric(const MetricTensor& g, const VectorField& x);

ComponentVerdicts is_killing(const MetricTensor& g, const VectorField& x,
                             const SamplingOptions& opts);

InverseMetric inverse_metric(const MetricTensor& g);

/// Str_g T = (-1)^{p(a)} g^{ab} T_{ba}.
SuperFunction metric_trace(const InverseMetric& ginv, const SymTensor2& t);
SuperFunction metric_trace(const MetricTensor& g, const SymTensor2& t);

struct ShanderReport {
  ComponentVerdicts reduced_killing;  // d g_{ba} / d tau = 0
  bool tautau_zero = true;
  std::vector<std::string> odd_one_form;  // the tau-row coefficients g_i
};

/// In coordinates where Q = d/dtau, the Killing equation reduces to
/// tau-independence of every component; also reports the split form.
ShanderReport check_killing_shander(const MetricTensor& g,
                                    std::size_t tau_coord,
                                    const SamplingOptions& opts);

struct MorphismVerdict {
  ComponentVerdicts metric_condition;
  ComponentVerdicts field_condition;
  bool pass() const {
    return metric_condition.all_zero && field_condition.all_zero;
  }
};

/// Pullback of the target metric along phi; no inverse change needed.
MetricTensor transform_metric(const CoordinateChange& phi,
                              const MetricTensor& g_target);

/// Push a vector field through phi; requires the declared inverse.
VectorField transform_vector(const CoordinateChange& phi,
                             const VectorField& x_source);

/// Both morphism conditions of a map of Riemannian Q-manifolds.
MorphismVerdict check_rq_morphism(const MetricTensor& g_src,
                                  const VectorField& q_src,
                                  const MetricTensor& g_dst,
                                  const VectorField& q_dst,
                                  const CoordinateChange& phi,
                                  const SamplingOptions& opts);

}  // namespace superkilling
