#pragma once

#include <optional>

#include "core/geometry.hpp"

namespace superkilling {

/// Berezin volume D[x] rho on a chart: rho even with non-vanishing body.
/// The coordinate volume element is implicit in the chart.
class BerezinVolume {
 public:
  BerezinVolume(ChartPtr chart, SuperFunction density,
                const SamplingOptions& opts = {});
  static BerezinVolume coordinate_volume(ChartPtr chart);

  const ChartPtr& chart() const { return chart_; }
  const SuperFunction& density() const { return density_; }

 private:
  ChartPtr chart_;
  SuperFunction density_;
};

/// dV = D[x] sqrt(Ber(g_{ba})).
BerezinVolume canonical_volume(const MetricTensor& g,
                               const SamplingOptions& opts = {});

/// Div_rho X = (-1)^{p(a)(p(X)+1)} (1/rho) d_a (X^a rho).
SuperFunction divergence(const BerezinVolume& rho, const VectorField& x);

/// Modular-class data at the representative level.
struct DivergenceReport {
  SuperFunction value;               // Div_rho Q
  ZeroCheck vanishes;                // zero verdict of the value
  std::optional<ZeroCheck> q_closed; // Q(Div_rho Q) = 0; set for homological Q
};

/// Requires Q homological (error otherwise). With the coordinate volume
/// the value is the local characteristic representative d_a Q^a.
DivergenceReport modular_representative(const BerezinVolume& rho,
                                        const VectorField& q,
                                        const SamplingOptions& opts);

/// Certificate that (M, g, Q) is unimodular: the canonical volume is
/// Q-invariant. Preconditions Q homological and Killing are checked and
/// reported; failure carries the failing component list.
struct UnimodularCertificate {
  ComponentVerdicts homological;
  ComponentVerdicts killing;
  std::optional<BerezinVolume> volume;   // canonical volume when built
  std::optional<ZeroCheck> divergence_zero;
  std::optional<ZeroCheck> density_level_zero;  // d_a(Q^a rho) = 0
  bool pass() const {
    return homological.all_zero && killing.all_zero && divergence_zero &&
           divergence_zero->verdict == Verdict::Zero && density_level_zero &&
           density_level_zero->verdict == Verdict::Zero;
  }
};

UnimodularCertificate certify_unimodular(const MetricTensor& g,
                                         const VectorField& q,
                                         const SamplingOptions& opts);

/// The same Berezin form on the other side of a change: D[x]rho on the
/// source equals D[x']rho' with rho' = (rho / Ber(J_phi)) o phi^{-1}.
BerezinVolume transform_volume(const CoordinateChange& phi,
                               const BerezinVolume& rho,
                               const SamplingOptions& opts = {});

}  // namespace superkilling
