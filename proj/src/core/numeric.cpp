#include "core/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace superkilling {

NumericSuperValue NumericSuperValue::constant(int gens, double v) {
  NumericSuperValue r(gens);
  r.c_[0] = v;
  return r;
}

NumericSuperValue NumericSuperValue::generator(int gens, int k) {
  NumericSuperValue r(gens);
  r.c_[std::size_t{1} << k] = 1.0;
  return r;
}

NumericSuperValue NumericSuperValue::operator+(const NumericSuperValue& o) const {
  NumericSuperValue r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

NumericSuperValue NumericSuperValue::operator-(const NumericSuperValue& o) const {
  NumericSuperValue r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

NumericSuperValue NumericSuperValue::operator-() const {
  NumericSuperValue r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

NumericSuperValue NumericSuperValue::scale(double v) const {
  NumericSuperValue r = *this;
  for (double& x : r.c_) x *= v;
  return r;
}

NumericSuperValue NumericSuperValue::operator*(const NumericSuperValue& o) const {
  NumericSuperValue r(gens_);
  for (std::size_t a = 0; a < c_.size(); ++a) {
    if (c_[a] == 0.0) continue;
    for (std::size_t b = 0; b < o.c_.size(); ++b) {
      if (o.c_[b] == 0.0 || (a & b)) continue;
      double v = c_[a] * o.c_[b];
      if (koszul_negative(a, b)) v = -v;
      r.c_[a | b] += v;
    }
  }
  return r;
}

NumericSuperValue NumericSuperValue::invert() const {
  double b = body();
  if (std::abs(b) < 1e-12)
    throw DivisionByZeroError("numeric inverse: vanishing body");
  NumericSuperValue soul = *this;
  soul.c_[0] = 0.0;
  NumericSuperValue u = soul.scale(-1.0 / b);
  NumericSuperValue acc = constant(gens_, 1.0);
  NumericSuperValue p = constant(gens_, 1.0);
  for (int k = 1; k <= gens_ / 2 + 1; ++k) {
    p = p * u;
    if (p.max_abs() == 0.0) break;
    acc = acc + p;
  }
  return acc.scale(1.0 / b);
}

double NumericSuperValue::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

// ------------------------------------------------------------- evaluation

std::optional<NumericSuperValue> eval_numeric(const SuperFunction& f,
                                              const EvalPoint& p) {
  int gens = static_cast<int>(f.chart()->odd_dim());
  NumericSuperValue r(gens);
  for (const auto& [mask, coeff] : f.terms()) {
    auto v = coeff.eval(p.values);
    if (!v) return std::nullopt;
    r.at(mask) += *v;
  }
  return r;
}

Sampler::Sampler(ChartPtr chart, std::uint64_t seed, double widen)
    : chart_(std::move(chart)), rng_(seed), widen_(widen) {}

EvalPoint Sampler::draw() {
  EvalPoint p;
  for (std::size_t i = 0; i < chart_->even_dim(); ++i) {
    const Interval& iv = chart_->box(i);
    double mid = 0.5 * (iv.lo + iv.hi);
    double half = 0.5 * (iv.hi - iv.lo) * widen_;
    std::uniform_real_distribution<double> dist(mid - half, mid + half);
    p.values[chart_->even_symbol(i)] = dist(rng_);
  }
  return p;
}

// -------------------------------------------------------------- zero check

namespace {

bool coefficients_rational(const SuperFunction& f) {
  for (const auto& [m, c] : f.terms())
    if (!c.is_rational()) return false;
  return true;
}

struct SampleStats {
  double max_abs = 0.0;
  std::string worst;
  int taken = 0;
};

SampleStats sample(const SuperFunction& f, const SamplingOptions& opts,
                   double widen) {
  Sampler sampler(f.chart(), opts.seed, widen);
  SampleStats st;
  int failures = 0;
  while (st.taken < opts.samples) {
    EvalPoint p = sampler.draw();
    auto v = eval_numeric(f, p);
    if (!v) {
      if (++failures > 100 * opts.samples)
        throw SamplingError("all numeric samples hit poles");
      continue;
    }
    ++st.taken;
    double m = v->max_abs();
    if (m > st.max_abs) {
      st.max_abs = m;
      std::string pt;
      for (std::size_t i = 0; i < f.chart()->even_dim(); ++i) {
        if (!pt.empty()) pt += ", ";
        pt += f.chart()->coord_name(i) + "=" +
              std::to_string(p.values.at(f.chart()->even_symbol(i)));
      }
      st.worst = "|value| = " + std::to_string(m) +
                 (pt.empty() ? "" : " at " + pt);
    }
  }
  return st;
}

}  // namespace

ZeroCheck check_zero(const SuperFunction& f, const SamplingOptions& opts) {
  if (f.is_zero()) {
    // Structural zero is exact; cross check is vacuous.
    return {Verdict::Zero, Method::Symbolic, 0.0, ""};
  }
  bool rational = coefficients_rational(f);
  if (rational) {
    // Reduced nonzero rational coefficients define a nonzero function.
    ZeroCheck r{Verdict::Nonzero, Method::Symbolic, 0.0, ""};
    if (opts.cross_check) {
      SampleStats st = sample(f, opts, 1.0);
      for (int round = 0; round < opts.widen_rounds && st.max_abs < opts.strong;
           ++round)
        st = sample(f, opts, 1.0 + round);
      if (st.max_abs < opts.tolerance)
        throw DisagreementError(
            "symbolically nonzero rational expression evaluates below "
            "tolerance at all samples: " +
            f.to_string());
      r.max_abs = st.max_abs;
      r.witness = st.worst;
    } else {
      r.witness = f.to_string();
    }
    return r;
  }
  // Transcendental coefficients: randomized evaluation decides.
  SampleStats st = sample(f, opts, 1.0);
  if (st.max_abs >= opts.strong)
    return {Verdict::Nonzero, Method::Numeric, st.max_abs, st.worst};
  for (int round = 0; round < opts.widen_rounds && st.max_abs >= opts.tolerance;
       ++round)
    st = sample(f, opts, 1.0 + round);
  if (st.max_abs < opts.tolerance)
    return {Verdict::Zero, Method::Numeric, st.max_abs, ""};
  return {Verdict::Nonzero, Method::Numeric, st.max_abs, st.worst};
}

}  // namespace superkilling
