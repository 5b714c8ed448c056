#include "core/geometry.hpp"

#include "core/errors.hpp"

namespace superkilling {

namespace {

bool sign_neg(int exponent) { return exponent & 1; }

SuperFunction signed_copy(const SuperFunction& f, bool negative) {
  return negative ? -f : f;
}

}  // namespace

// ------------------------------------------------------------- VectorField

VectorField::VectorField(ChartPtr chart, Parity parity,
                         std::vector<SuperFunction> components)
    : chart_(std::move(chart)), parity_(parity), comps_(std::move(components)) {
  if (comps_.size() != chart_->dim())
    throw InvalidArgumentError("vector field needs one component per "
                               "coordinate");
  for (std::size_t a = 0; a < comps_.size(); ++a) {
    if (comps_[a].chart() != chart_)
      throw ChartMismatchError("vector field component on a foreign chart");
    if (!comps_[a].is_homogeneous(parity_ + chart_->parity(a)))
      throw ParityError("component of d/d" + chart_->coord_name(a) +
                        " violates the declared field parity");
  }
}

VectorField VectorField::zero(ChartPtr chart, Parity parity) {
  std::vector<SuperFunction> comps(chart->dim(), SuperFunction::zero(chart));
  return VectorField(std::move(chart), parity, std::move(comps));
}

VectorField VectorField::coordinate(ChartPtr chart, std::size_t coord) {
  Parity p = chart->parity(coord);
  std::vector<SuperFunction> comps(chart->dim(), SuperFunction::zero(chart));
  comps[coord] = SuperFunction::one(chart);
  return VectorField(std::move(chart), p, std::move(comps));
}

SuperFunction VectorField::apply(const SuperFunction& f) const {
  SuperFunction acc = SuperFunction::zero(chart_);
  for (std::size_t a = 0; a < chart_->dim(); ++a)
    acc = acc + comps_[a] * f.partial(a);
  return acc;
}

// -------------------------------------------------------------- SymTensor2

SymTensor2::SymTensor2(ChartPtr chart, Parity parity,
                       std::vector<SuperFunction> components)
    : chart_(std::move(chart)), parity_(parity), comps_(std::move(components)) {
  std::size_t d = chart_->dim();
  if (comps_.size() != d * d)
    throw InvalidArgumentError("rank-2 tensor needs dim^2 components");
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t a = 0; a < d; ++a) {
      const SuperFunction& c = comps_[b * d + a];
      if (c.chart() != chart_)
        throw ChartMismatchError("tensor component on a foreign chart");
      if (!c.is_homogeneous(parity_ + chart_->parity(a) + chart_->parity(b)))
        throw ParityError("tensor component parity mismatch");
      // graded symmetry T_{ab} = (-1)^{p(a)p(b)} T_{ba}
      bool neg = chart_->parity(a) == Parity::Odd &&
                 chart_->parity(b) == Parity::Odd;
      if (!(comps_[a * d + b] - signed_copy(c, neg)).is_zero())
        throw InvalidArgumentError("tensor components are not graded "
                                   "symmetric");
    }
}

// ------------------------------------------------------------ MetricTensor

MetricTensor::MetricTensor(ChartPtr chart,
                           std::vector<SuperFunction> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
  // Shares the SymTensor2 invariants with parity Even; validated there.
  SymTensor2 check(chart_, Parity::Even, comps_);
  SuperFunction ber = berezinian(matrix());
  if (ber.body().is_zero())
    throw SingularMatrixError("metric is degenerate: Berezinian body "
                              "vanishes identically");
}

SuperMatrix MetricTensor::matrix() const {
  std::vector<Parity> par;
  for (std::size_t a = 0; a < dim(); ++a) par.push_back(chart_->parity(a));
  SuperMatrix m(par, par, SuperFunction::zero(chart_));
  for (std::size_t b = 0; b < dim(); ++b)
    for (std::size_t a = 0; a < dim(); ++a) m.at(b, a) = at(b, a);
  return m;
}

InverseMetric::InverseMetric(ChartPtr chart,
                             std::vector<SuperFunction> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {}

// --------------------------------------------------------------- verdicts

void ComponentVerdicts::absorb(const std::string& label,
                               const ZeroCheck& check) {
  if (check.method == Method::Numeric) method = Method::Numeric;
  if (check.verdict == Verdict::Nonzero) {
    all_zero = false;
    witnesses.push_back(label + ": " + check.witness);
  }
}

// ------------------------------------------------------------- operations

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.chart() != y.chart())
    throw ChartMismatchError("lie_bracket: fields on different charts");
  const ChartPtr& chart = x.chart();
  bool neg = x.parity() == Parity::Odd && y.parity() == Parity::Odd;
  std::vector<SuperFunction> comps;
  for (std::size_t b = 0; b < chart->dim(); ++b) {
    SuperFunction acc = SuperFunction::zero(chart);
    for (std::size_t a = 0; a < chart->dim(); ++a) {
      acc = acc + x.component(a) * y.component(b).partial(a);
      SuperFunction yx = y.component(a) * x.component(b).partial(a);
      acc = neg ? acc + yx : acc - yx;
    }
    comps.push_back(acc);
  }
  return VectorField(chart, x.parity() + y.parity(), std::move(comps));
}

ComponentVerdicts is_homological(const VectorField& q,
                                 const SamplingOptions& opts) {
  if (q.parity() != Parity::Odd)
    throw ParityError("is_homological: a homological field must be odd");
  const ChartPtr& chart = q.chart();
  ComponentVerdicts v;
  for (std::size_t b = 0; b < chart->dim(); ++b) {
    SuperFunction acc = SuperFunction::zero(chart);
    for (std::size_t a = 0; a < chart->dim(); ++a)
      acc = acc + q.component(a) * q.component(b).partial(a);
    v.absorb("Q^a d_a Q^" + chart->coord_name(b), check_zero(acc, opts));
  }
  return v;
}

SuperFunction pairing(const MetricTensor& g, const VectorField& x,
                      const VectorField& y) {
  if (g.chart() != x.chart() || g.chart() != y.chart())
    throw ChartMismatchError("pairing: chart mismatch");
  const ChartPtr& chart = g.chart();
  SuperFunction acc = SuperFunction::zero(chart);
  for (std::size_t a = 0; a < chart->dim(); ++a) {
    for (std::size_t b = 0; b < chart->dim(); ++b) {
      SuperFunction term = x.component(a) * y.component(b) * g.at(b, a);
      bool neg = y.parity() == Parity::Odd && chart->parity(a) == Parity::Odd;
      acc = acc + signed_copy(term, neg);
    }
  }
  return acc;
}

SymTensor2 lie_derivative_metric(const MetricTensor& g, const VectorField& x) {
  if (g.chart() != x.chart())
    throw ChartMismatchError("lie_derivative_metric: chart mismatch");
  const ChartPtr& chart = g.chart();
  std::size_t d = chart->dim();
  int px = parity_int(x.parity());
  std::vector<SuperFunction> comps(d * d, SuperFunction::zero(chart));
  for (std::size_t b = 0; b < d; ++b) {
    int pb = parity_int(chart->parity(b));
    for (std::size_t a = 0; a < d; ++a) {
      int pa = parity_int(chart->parity(a));
      SuperFunction acc = SuperFunction::zero(chart);
      for (std::size_t c = 0; c < d; ++c) {
        acc = acc + signed_copy(x.component(c).partial(b) * g.at(c, a),
                                sign_neg(px * pa));
        acc = acc + signed_copy(x.component(c).partial(a) * g.at(c, b),
                                sign_neg(pb * (px + pa)));
      }
      SuperFunction transport = x.apply(g.at(b, a));
      acc = acc + signed_copy(transport, sign_neg(px * (pa + pb)));
      comps[b * d + a] = acc;
    }
  }
  return SymTensor2(chart, x.parity(), std::move(comps));
}

ComponentVerdicts is_killing(const MetricTensor& g, const VectorField& x,
                             const SamplingOptions& opts) {
  SymTensor2 l = lie_derivative_metric(g, x);
  const ChartPtr& chart = g.chart();
  ComponentVerdicts v;
  for (std::size_t b = 0; b < chart->dim(); ++b)
    for (std::size_t a = 0; a < chart->dim(); ++a)
      v.absorb("(L_X g)_{" + chart->coord_name(b) + "," +
                   chart->coord_name(a) + "}",
               check_zero(l.at(b, a), opts));
  return v;
}

InverseMetric inverse_metric(const MetricTensor& g) {
  SuperMatrix w = inverse(g.matrix());
  std::size_t d = g.dim();
  std::vector<SuperFunction> comps;
  comps.reserve(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) comps.push_back(w.at(a, b));
  InverseMetric ginv(g.chart(), std::move(comps));
  // Defining relations, both sides.
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      SuperFunction left = SuperFunction::zero(g.chart());
      SuperFunction right = SuperFunction::zero(g.chart());
      for (std::size_t c = 0; c < d; ++c) {
        left = left + ginv.at(a, c) * g.at(c, b);
        right = right + g.at(b, c) * ginv.at(c, a);
      }
      SuperFunction delta =
          a == b ? SuperFunction::one(g.chart()) : SuperFunction::zero(g.chart());
      if (!(left - delta).is_zero() || !(right - delta).is_zero())
        throw Error("inverse metric failed its defining relation");
    }
  return ginv;
}

SuperFunction metric_trace(const InverseMetric& ginv, const SymTensor2& t) {
  if (ginv.chart() != t.chart())
    throw ChartMismatchError("metric_trace: chart mismatch");
  const ChartPtr& chart = t.chart();
  SuperFunction acc = SuperFunction::zero(chart);
  for (std::size_t a = 0; a < chart->dim(); ++a)
    for (std::size_t b = 0; b < chart->dim(); ++b)
      acc = acc + signed_copy(ginv.at(a, b) * t.at(b, a),
                              chart->parity(a) == Parity::Odd);
  return acc;
}

SuperFunction metric_trace(const MetricTensor& g, const SymTensor2& t) {
  return metric_trace(inverse_metric(g), t);
}

ShanderReport check_killing_shander(const MetricTensor& g,
                                    std::size_t tau_coord,
                                    const SamplingOptions& opts) {
  const ChartPtr& chart = g.chart();
  if (tau_coord >= chart->dim() || chart->parity(tau_coord) != Parity::Odd)
    throw ParityError("check_killing_shander: tau must be an odd coordinate");
  ShanderReport rep;
  for (std::size_t b = 0; b < chart->dim(); ++b)
    for (std::size_t a = 0; a < chart->dim(); ++a)
      rep.reduced_killing.absorb(
          "d g_{" + chart->coord_name(b) + "," + chart->coord_name(a) +
              "}/d" + chart->coord_name(tau_coord),
          check_zero(g.at(b, a).partial(tau_coord), opts));
  rep.tautau_zero = g.at(tau_coord, tau_coord).is_zero();
  for (std::size_t i = 0; i < chart->dim(); ++i) {
    if (i == tau_coord) continue;
    const SuperFunction& gi = g.at(tau_coord, i);
    if (!gi.is_zero())
      rep.odd_one_form.push_back("g_{" + chart->coord_name(tau_coord) + "," +
                                 chart->coord_name(i) + "} = " +
                                 gi.to_string());
  }
  return rep;
}

MetricTensor transform_metric(const CoordinateChange& phi,
                              const MetricTensor& g_target) {
  if (g_target.chart() != phi.target())
    throw ChartMismatchError("transform_metric: metric not on the target "
                             "chart");
  const ChartPtr& src = phi.source();
  const ChartPtr& dst = phi.target();
  SuperMatrix j = jacobian(phi);
  std::size_t d = src->dim();
  // Pull the target components back once.
  std::vector<SuperFunction> pulled(dst->dim() * dst->dim(),
                                    SuperFunction::zero(src));
  for (std::size_t beta = 0; beta < dst->dim(); ++beta)
    for (std::size_t alpha = 0; alpha < dst->dim(); ++alpha)
      pulled[beta * dst->dim() + alpha] =
          pullback(phi, g_target.at(beta, alpha));
  // (phi* g)_{ba} = (-1)^{(p(a)+p(alpha)) p(b)} J^alpha_a J^beta_b
  //                 g_{beta alpha}(phi(x))
  std::vector<SuperFunction> comps(d * d, SuperFunction::zero(src));
  for (std::size_t b = 0; b < d; ++b) {
    int pb = parity_int(src->parity(b));
    for (std::size_t a = 0; a < d; ++a) {
      int pa = parity_int(src->parity(a));
      SuperFunction acc = SuperFunction::zero(src);
      for (std::size_t alpha = 0; alpha < dst->dim(); ++alpha) {
        int palpha = parity_int(dst->parity(alpha));
        for (std::size_t beta = 0; beta < dst->dim(); ++beta) {
          const SuperFunction& pg = pulled[beta * dst->dim() + alpha];
          if (pg.is_zero()) continue;
          SuperFunction term = j.at(alpha, a) * j.at(beta, b) * pg;
          acc = acc + signed_copy(term, sign_neg((pa + palpha) * pb));
        }
      }
      comps[b * d + a] = acc;
    }
  }
  return MetricTensor(src, std::move(comps));
}

VectorField transform_vector(const CoordinateChange& phi,
                             const VectorField& x_source) {
  if (x_source.chart() != phi.source())
    throw ChartMismatchError("transform_vector: field not on the source "
                             "chart");
  CoordinateChange inv = phi.inverse();
  SuperMatrix j = jacobian(phi);
  std::vector<SuperFunction> comps;
  for (std::size_t alpha = 0; alpha < phi.target()->dim(); ++alpha) {
    SuperFunction acc = SuperFunction::zero(phi.source());
    for (std::size_t a = 0; a < phi.source()->dim(); ++a)
      acc = acc + x_source.component(a) * j.at(alpha, a);
    comps.push_back(pullback(inv, acc));
  }
  return VectorField(phi.target(), x_source.parity(), std::move(comps));
}

MorphismVerdict check_rq_morphism(const MetricTensor& g_src,
                                  const VectorField& q_src,
                                  const MetricTensor& g_dst,
                                  const VectorField& q_dst,
                                  const CoordinateChange& phi,
                                  const SamplingOptions& opts) {
  MorphismVerdict v;
  MetricTensor pulled = transform_metric(phi, g_dst);
  const ChartPtr& src = phi.source();
  for (std::size_t b = 0; b < src->dim(); ++b)
    for (std::size_t a = 0; a < src->dim(); ++a)
      v.metric_condition.absorb(
          "(phi* g')_{" + src->coord_name(b) + "," + src->coord_name(a) +
              "} - g_{...}",
          check_zero(pulled.at(b, a) - g_src.at(b, a), opts));
  SuperMatrix j = jacobian(phi);
  for (std::size_t alpha = 0; alpha < phi.target()->dim(); ++alpha) {
    SuperFunction lhs = SuperFunction::zero(src);
    for (std::size_t a = 0; a < src->dim(); ++a)
      lhs = lhs + q_src.component(a) * j.at(alpha, a);
    SuperFunction rhs = pullback(phi, q_dst.component(alpha));
    v.field_condition.absorb(
        "Q relatedness on " + phi.target()->coord_name(alpha),
        check_zero(lhs - rhs, opts));
  }
  return v;
}

}  // namespace superkilling
