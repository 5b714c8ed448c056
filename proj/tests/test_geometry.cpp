#include <doctest.h>

#include "core/errors.hpp"
#include "oracles.hpp"

using namespace superkilling;
using namespace superkilling::testing;

namespace {

ChartPtr r12() {
  static ChartPtr c = Chart::create("G12", {"t"}, {"xi1", "xi2"});
  return c;
}
ChartPtr r22() {
  static ChartPtr c = Chart::create("G22", {"x", "y"}, {"th1", "th2"});
  return c;
}

SuperFunction coord(const ChartPtr& c, std::size_t i) {
  return SuperFunction::coordinate(c, i);
}

// dt^2 + 2 s dxi1 dxi2 on the 1|2 chart, components by hand.
MetricTensor standard_metric(int s = 1) {
  std::vector<SuperFunction> comps(9, SuperFunction::zero(r12()));
  comps[0] = SuperFunction::one(r12());
  comps[2 * 3 + 1] = SuperFunction::constant(r12(), Rational(s));
  comps[1 * 3 + 2] = SuperFunction::constant(r12(), Rational(-s));
  return MetricTensor(r12(), comps);
}

// (dt^2 + 2 dxi1 dxi2) / t^2
MetricTensor half_superline_metric() {
  ScalarExpr t = ScalarExpr::symbol("t");
  ScalarExpr f = (t * t).invert();
  std::vector<SuperFunction> comps(9, SuperFunction::zero(r12()));
  comps[0] = SuperFunction::scalar(r12(), f);
  comps[2 * 3 + 1] = SuperFunction::scalar(r12(), f);
  comps[1 * 3 + 2] = SuperFunction::scalar(r12(), -f);
  return MetricTensor(r12(), comps);
}

VectorField field_from(const ChartPtr& chart, Parity p,
                       std::vector<SuperFunction> comps) {
  return VectorField(chart, p, std::move(comps));
}

}  // namespace

TEST_CASE("lie bracket") {
  SUBCASE("coordinate fields commute") {
    VectorField d1 = VectorField::coordinate(r12(), 1);
    VectorField b = lie_bracket(d1, d1);
    for (std::size_t a = 0; a < 3; ++a) CHECK(b.component(a).is_zero());
  }

  SUBCASE("classical bracket embeds at m = 0") {
    ChartPtr line = Chart::create("Gline", {"u"}, {});
    ScalarExpr u = ScalarExpr::symbol("u");
    VectorField e = field_from(line, Parity::Even,
                               {SuperFunction::scalar(line, u)});  // u d/du
    VectorField d = VectorField::coordinate(line, 0);
    VectorField b = lie_bracket(e, d);
    CHECK(b.component(0) == -SuperFunction::one(line));
  }

  SUBCASE("even bracket of two mixed fields") {
    // [xi1 d/dxi2, xi2 d/dxi1] = xi1 d/dxi1 - xi2 d/dxi2
    VectorField x = field_from(r12(), Parity::Even,
                               {SuperFunction::zero(r12()),
                                SuperFunction::zero(r12()), coord(r12(), 1)});
    VectorField y = field_from(r12(), Parity::Even,
                               {SuperFunction::zero(r12()), coord(r12(), 2),
                                SuperFunction::zero(r12())});
    VectorField b = lie_bracket(x, y);
    CHECK(b.component(0).is_zero());
    CHECK(b.component(1) == coord(r12(), 1));
    CHECK(b.component(2) == -coord(r12(), 2));
  }

  SUBCASE("bracket agrees with operator composition") {
    RandomSource rnd(31);
    for (auto [px, py] : {std::pair{Parity::Even, Parity::Odd},
                          {Parity::Odd, Parity::Odd},
                          {Parity::Even, Parity::Even}}) {
      VectorField x = rnd.field(r12(), px);
      VectorField y = rnd.field(r12(), py);
      VectorField b = lie_bracket(x, y);
      SuperFunction f = rnd.even_function(r12()) +
                        rnd.homogeneous(r12(), Parity::Odd);
      SuperFunction composed = x.apply(y.apply(f));
      SuperFunction yx = y.apply(x.apply(f));
      bool neg = px == Parity::Odd && py == Parity::Odd;
      composed = neg ? composed + yx : composed - yx;
      CHECK(b.apply(f) == composed);
    }
  }

  SUBCASE("graded antisymmetry") {
    RandomSource rnd(37);
    VectorField x = rnd.field(r12(), Parity::Odd);
    VectorField y = rnd.field(r12(), Parity::Odd);
    VectorField ab = lie_bracket(x, y);
    VectorField ba = lie_bracket(y, x);
    // odd-odd bracket is symmetric: [X,Y] = +[Y,X]
    for (std::size_t a = 0; a < 3; ++a)
      CHECK(ab.component(a) == ba.component(a));
  }
}

TEST_CASE("homological condition") {
  SUBCASE("odd translation is homological") {
    VectorField q = VectorField::coordinate(r12(), 1);
    CHECK(is_homological(q, {}).all_zero);
  }

  SUBCASE("xi1 d/dt is homological") {
    VectorField q = field_from(r12(), Parity::Odd,
                               {coord(r12(), 1), SuperFunction::zero(r12()),
                                SuperFunction::zero(r12())});
    CHECK(is_homological(q, {}).all_zero);
  }

  SUBCASE("(xi1+xi2) d/dt + t d/dxi1 is not homological") {
    ScalarExpr t = ScalarExpr::symbol("t");
    VectorField q = field_from(
        r12(), Parity::Odd,
        {coord(r12(), 1) + coord(r12(), 2),
         SuperFunction::scalar(r12(), t), SuperFunction::zero(r12())});
    ComponentVerdicts v = is_homological(q, {});
    CHECK(!v.all_zero);
    CHECK(!v.witnesses.empty());
  }

  SUBCASE("even fields are rejected") {
    VectorField x = VectorField::coordinate(r12(), 0);
    CHECK_THROWS_AS(is_homological(x, {}), ParityError);
  }

  SUBCASE("matches half the self bracket") {
    RandomSource rnd(3);
    for (int trial = 0; trial < 10; ++trial) {
      VectorField q = rnd.field(r12(), Parity::Odd);
      VectorField qq = lie_bracket(q, q);
      bool square_zero = true;
      for (std::size_t a = 0; a < 3; ++a)
        if (!qq.component(a).is_zero()) square_zero = false;
      CHECK(is_homological(q, {}).all_zero == square_zero);
    }
  }
}

TEST_CASE("metric pairing") {
  MetricTensor g = standard_metric(+1);

  SUBCASE("paper values on the flat 1|2 metric") {
    VectorField dt = VectorField::coordinate(r12(), 0);
    VectorField d1 = VectorField::coordinate(r12(), 1);
    VectorField d2 = VectorField::coordinate(r12(), 2);
    CHECK(pairing(g, dt, dt) == SuperFunction::one(r12()));
    // frozen from the vertical-lift expansion of dt^2 + 2 dxi1 dxi2
    CHECK(pairing(g, d1, d2) == -SuperFunction::one(r12()));
    CHECK(pairing(g, d2, d1) == SuperFunction::one(r12()));
    CHECK(pairing(g, d1, d1).is_zero());
    VectorField zero = VectorField::zero(r12(), Parity::Even);
    CHECK(pairing(g, zero, dt).is_zero());
  }

  SUBCASE("pairing recovers the components with the displayed sign") {
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        VectorField da = VectorField::coordinate(r12(), a);
        VectorField db = VectorField::coordinate(r12(), b);
        SuperFunction expected = g.at(b, a);
        if (r12()->parity(a) == Parity::Odd &&
            r12()->parity(b) == Parity::Odd)
          expected = -expected;
        CHECK(pairing(g, da, db) == expected);
      }
  }

  SUBCASE("agrees with the vertical lift on random fields") {
    RandomSource rnd(41);
    for (int trial = 0; trial < 5; ++trial) {
      MetricTensor h = rnd.metric(r12());
      for (auto [px, py] : {std::pair{Parity::Even, Parity::Even},
                            {Parity::Even, Parity::Odd},
                            {Parity::Odd, Parity::Odd}}) {
        VectorField x = rnd.field(r12(), px);
        VectorField y = rnd.field(r12(), py);
        CHECK(pairing(h, x, y) == pairing_via_lift(h, x, y));
      }
    }
  }

  SUBCASE("graded symmetry and linearity") {
    RandomSource rnd(43);
    MetricTensor h = rnd.metric(r12());
    VectorField x = rnd.field(r12(), Parity::Odd);
    VectorField y = rnd.field(r12(), Parity::Odd);
    // <X|Y> = (-1)^{p(X)p(Y)} <Y|X>
    CHECK(pairing(h, x, y) == -pairing(h, y, x));
    SuperFunction f = rnd.even_function(r12());
    std::vector<SuperFunction> scaled;
    for (std::size_t a = 0; a < 3; ++a)
      scaled.push_back(f * x.component(a));
    VectorField fx = field_from(r12(), Parity::Odd, scaled);
    CHECK(pairing(h, fx, y) == f * pairing(h, x, y));
  }
}

TEST_CASE("lie derivative of the metric") {
  SUBCASE("zero field gives the zero tensor") {
    MetricTensor g = standard_metric();
    SymTensor2 l = lie_derivative_metric(g, VectorField::zero(r12(), Parity::Even));
    for (const auto& c : l.components()) CHECK(c.is_zero());
  }

  SUBCASE("flat metric is invariant under odd translation") {
    MetricTensor g = standard_metric();
    SymTensor2 l = lie_derivative_metric(g, VectorField::coordinate(r12(), 1));
    for (const auto& c : l.components()) CHECK(c.is_zero());
  }

  SUBCASE("half-superline: t d/dt fails only off the even block") {
    MetricTensor g = half_superline_metric();
    ScalarExpr t = ScalarExpr::symbol("t");
    VectorField x = field_from(r12(), Parity::Even,
                               {SuperFunction::scalar(r12(), t),
                                SuperFunction::zero(r12()),
                                SuperFunction::zero(r12())});
    SymTensor2 l = lie_derivative_metric(g, x);
    CHECK(l.at(0, 0).is_zero());
    // frozen by hand from the displayed formula: t d/dt (t^-2) = -2 t^-2
    CHECK(l.at(2, 1) ==
          SuperFunction::scalar(r12(), ScalarExpr(-2L) * (t * t).invert()));
    CHECK(l.at(1, 2) ==
          SuperFunction::scalar(r12(), ScalarExpr(2L) * (t * t).invert()));
  }

  SUBCASE("agrees with the infinitesimal flow oracle") {
    RandomSource rnd(53);
    for (const ChartPtr& chart : {r12(), r22()}) {
      for (int trial = 0; trial < 3; ++trial) {
        MetricTensor g = rnd.metric(chart);
        for (Parity p : {Parity::Even, Parity::Odd}) {
          VectorField x = rnd.field(chart, p);
          SymTensor2 l = lie_derivative_metric(g, x);
          std::vector<SuperFunction> oracle = lie_derivative_via_flow(g, x);
          for (std::size_t i = 0; i < oracle.size(); ++i)
            CHECK(l.components()[i] == oracle[i]);
        }
      }
    }
  }
}

TEST_CASE("killing verdicts on the paper examples") {
  MetricTensor flat = standard_metric();
  MetricTensor half = half_superline_metric();
  VectorField q = VectorField::coordinate(r12(), 1);
  VectorField dt = VectorField::coordinate(r12(), 0);
  CHECK(is_killing(flat, q, {}).all_zero);
  CHECK(is_killing(flat, dt, {}).all_zero);
  CHECK(is_killing(half, q, {}).all_zero);
  ComponentVerdicts v = is_killing(half, dt, {});
  CHECK(!v.all_zero);

  SUBCASE("killing fields close under the bracket") {
    // on the flat metric, translations and rotations-like fields
    RandomSource rnd(59);
    std::vector<VectorField> killing_fields{
        q, VectorField::coordinate(r12(), 2), dt};
    for (const VectorField& x : killing_fields)
      for (const VectorField& y : killing_fields) {
        VectorField b = lie_bracket(x, y);
        CHECK(is_killing(flat, b, {}).all_zero);
      }
  }
}

TEST_CASE("inverse metric") {
  SUBCASE("flat block inverse") {
    MetricTensor g = standard_metric();
    InverseMetric w = inverse_metric(g);
    CHECK(w.at(0, 0) == SuperFunction::one(r12()));
    // odd block [[0,-1],[1,0]] inverts to [[0,1],[-1,0]]
    CHECK(w.at(1, 2) == SuperFunction::one(r12()));
    CHECK(w.at(2, 1) == -SuperFunction::one(r12()));
  }

  SUBCASE("symmetry proposition on random nondegenerate metrics") {
    RandomSource rnd(61);
    for (const ChartPtr& chart : {r12(), r22()}) {
      for (int trial = 0; trial < 5; ++trial) {
        MetricTensor g = rnd.metric(chart);
        InverseMetric w = inverse_metric(g);
        std::size_t d = chart->dim();
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) {
            int pa = parity_int(chart->parity(a));
            int pb = parity_int(chart->parity(b));
            SuperFunction lhs = (pb & 1) ? -w.at(a, b) : w.at(a, b);
            SuperFunction rhs = ((pa * pb + pa) & 1) ? -w.at(b, a) : w.at(b, a);
            CHECK(lhs == rhs);
          }
      }
    }
  }
}

TEST_CASE("metric trace") {
  SUBCASE("trace of the metric itself is n - m") {
    MetricTensor g = standard_metric();
    SymTensor2 as_tensor(r12(), Parity::Even, g.components());
    SuperFunction tr = metric_trace(g, as_tensor);
    CHECK(tr == SuperFunction::constant(r12(), Rational(-1)));  // 1 - 2
  }

  SUBCASE("zero tensor traces to zero") {
    MetricTensor g = standard_metric();
    SymTensor2 zero(r12(), Parity::Even,
                    std::vector<SuperFunction>(9, SuperFunction::zero(r12())));
    CHECK(metric_trace(g, zero).is_zero());
  }

  SUBCASE("trace is function linear") {
    RandomSource rnd(67);
    MetricTensor g = rnd.metric(r12());
    InverseMetric w = inverse_metric(g);
    MetricTensor h = rnd.metric(r12());
    SymTensor2 t(r12(), Parity::Even, h.components());
    SuperFunction f = rnd.even_function(r12());
    std::vector<SuperFunction> scaled;
    for (const auto& c : h.components()) scaled.push_back(f * c);
    SymTensor2 ft(r12(), Parity::Even, scaled);
    CHECK(metric_trace(w, ft) == f * metric_trace(w, t));
  }
}

TEST_CASE("killing-shander reduced equation") {
  SUBCASE("flat metric passes with tau = xi1") {
    MetricTensor g = standard_metric();
    ShanderReport rep = check_killing_shander(g, 1, {});
    CHECK(rep.reduced_killing.all_zero);
    CHECK(rep.tautau_zero);
  }

  SUBCASE("xi-dependent even component fails") {
    // g_tt = 1 + xi1 xi2
    std::vector<SuperFunction> comps = standard_metric().components();
    comps[0] = SuperFunction::one(r12()) + coord(r12(), 1) * coord(r12(), 2);
    MetricTensor g(r12(), comps);
    ShanderReport rep = check_killing_shander(g, 1, {});
    CHECK(!rep.reduced_killing.all_zero);
    CHECK(rep.tautau_zero);  // forced by graded symmetry regardless
  }

  SUBCASE("even index is rejected") {
    MetricTensor g = standard_metric();
    CHECK_THROWS_AS(check_killing_shander(g, 0, {}), ParityError);
  }

  SUBCASE("equivalence with the full killing check") {
    RandomSource rnd(71);
    for (int trial = 0; trial < 20; ++trial) {
      MetricTensor g = rnd.metric(r12());
      for (std::size_t tau : {1u, 2u}) {
        bool reduced = check_killing_shander(g, tau, {}).reduced_killing.all_zero;
        bool full =
            is_killing(g, VectorField::coordinate(r12(), tau), {}).all_zero;
        CHECK(reduced == full);
      }
    }
  }
}

TEST_CASE("riemannian Q morphisms") {
  ChartPtr a = r12();
  ChartPtr b = Chart::create("G12b", {"s"}, {"e1", "e2"});
  auto metric_on = [](const ChartPtr& chart) {
    std::vector<SuperFunction> comps(9, SuperFunction::zero(chart));
    comps[0] = SuperFunction::one(chart);
    comps[2 * 3 + 1] = SuperFunction::one(chart);
    comps[1 * 3 + 2] = -SuperFunction::one(chart);
    return MetricTensor(chart, comps);
  };
  MetricTensor ga = metric_on(a);
  MetricTensor gb = metric_on(b);
  VectorField qa = VectorField::coordinate(a, 1);
  VectorField qb = VectorField::coordinate(b, 1);

  SUBCASE("identity-like translation is a morphism") {
    ScalarExpr t = ScalarExpr::symbol("t");
    std::vector<SuperFunction> fwd{
        SuperFunction::scalar(a, t + ScalarExpr(1L)), coord(a, 1),
        coord(a, 2)};
    CoordinateChange phi(a, b, fwd);
    MorphismVerdict v = check_rq_morphism(ga, qa, gb, qb, phi, {});
    CHECK(v.pass());
  }

  SUBCASE("odd swap fails both conditions") {
    std::vector<SuperFunction> fwd{
        SuperFunction::scalar(a, ScalarExpr::symbol("t")), coord(a, 2),
        coord(a, 1)};
    CoordinateChange phi(a, b, fwd);
    MorphismVerdict v = check_rq_morphism(ga, qa, gb, qb, phi, {});
    CHECK(!v.metric_condition.all_zero);
    CHECK(!v.field_condition.all_zero);
    CHECK(!v.pass());
  }
}
