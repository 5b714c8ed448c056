#include "core/berezin.hpp"

#include "core/errors.hpp"

namespace superkilling {

BerezinVolume::BerezinVolume(ChartPtr chart, SuperFunction density,
                             const SamplingOptions& opts)
    : chart_(std::move(chart)), density_(std::move(density)) {
  if (density_.chart() != chart_)
    throw ChartMismatchError("volume density on a foreign chart");
  if (!density_.is_homogeneous(Parity::Even))
    throw ParityError("a Berezin volume density must be even");
  if (density_.body().is_zero())
    throw DivisionByZeroError("volume density body vanishes identically");
  // Nowhere vanishing inside the validity box, checked numerically.
  SuperFunction body = SuperFunction::scalar(chart_, density_.body());
  Sampler sampler(chart_, opts.seed);
  int taken = 0, failures = 0;
  while (taken < opts.samples) {
    auto v = eval_numeric(body, sampler.draw());
    if (!v) {
      if (++failures > 100 * opts.samples)
        throw SamplingError("volume density: sampling failed");
      continue;
    }
    ++taken;
    if (std::abs(v->body()) < opts.tolerance)
      throw InvalidArgumentError(
          "volume density vanishes inside the validity box");
  }
}

BerezinVolume BerezinVolume::coordinate_volume(ChartPtr chart) {
  SuperFunction one = SuperFunction::one(chart);
  return BerezinVolume(std::move(chart), std::move(one));
}

BerezinVolume canonical_volume(const MetricTensor& g,
                               const SamplingOptions& opts) {
  SuperFunction ber = berezinian(g.matrix());
  return BerezinVolume(g.chart(), ber.sqrt_even(), opts);
}

SuperFunction divergence(const BerezinVolume& rho, const VectorField& x) {
  if (rho.chart() != x.chart())
    throw ChartMismatchError("divergence: chart mismatch");
  const ChartPtr& chart = x.chart();
  SuperFunction inv = rho.density().invert();
  SuperFunction acc = SuperFunction::zero(chart);
  int px = parity_int(x.parity());
  for (std::size_t a = 0; a < chart->dim(); ++a) {
    SuperFunction term =
        inv * (x.component(a) * rho.density()).partial(a);
    bool neg = (parity_int(chart->parity(a)) * (px + 1)) & 1;
    acc = neg ? acc - term : acc + term;
  }
  return acc;
}

DivergenceReport modular_representative(const BerezinVolume& rho,
                                        const VectorField& q,
                                        const SamplingOptions& opts) {
  ComponentVerdicts hom = is_homological(q, opts);
  if (!hom.all_zero) {
    std::string detail;
    for (const auto& w : hom.witnesses) detail += "\n  " + w;
    throw InvalidArgumentError("modular_representative: field is not "
                               "homological:" + detail);
  }
  DivergenceReport rep{divergence(rho, q), {}, std::nullopt};
  rep.vanishes = check_zero(rep.value, opts);
  rep.q_closed = check_zero(q.apply(rep.value), opts);
  return rep;
}

UnimodularCertificate certify_unimodular(const MetricTensor& g,
                                         const VectorField& q,
                                         const SamplingOptions& opts) {
  UnimodularCertificate cert;
  if (q.parity() != Parity::Odd)
    throw ParityError("certify_unimodular: Q must be odd");
  cert.homological = is_homological(q, opts);
  cert.killing = is_killing(g, q, opts);
  if (!cert.homological.all_zero || !cert.killing.all_zero) return cert;
  cert.volume = canonical_volume(g, opts);
  cert.divergence_zero = check_zero(divergence(*cert.volume, q), opts);
  // Density-level form of L_Q dV = 0: the undivided expression
  // (-1)^{p(a)(p(Q)+1)} d_a(Q^a rho) vanishes as well.
  const ChartPtr& chart = g.chart();
  SuperFunction acc = SuperFunction::zero(chart);
  for (std::size_t a = 0; a < chart->dim(); ++a)
    acc = acc + (q.component(a) * cert.volume->density()).partial(a);
  cert.density_level_zero = check_zero(acc, opts);
  return cert;
}

BerezinVolume transform_volume(const CoordinateChange& phi,
                               const BerezinVolume& rho,
                               const SamplingOptions& opts) {
  if (rho.chart() != phi.source())
    throw ChartMismatchError("transform_volume: volume not on the source "
                             "chart");
  SuperFunction ber = berezinian(jacobian(phi));
  SuperFunction scaled = rho.density() * ber.invert();
  return BerezinVolume(phi.target(), pullback(phi.inverse(), scaled), opts);
}

}  // namespace superkilling
