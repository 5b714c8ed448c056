#include <doctest.h>

#include "core/berezin.hpp"
#include "core/errors.hpp"
#include "oracles.hpp"

using namespace superkilling;
using namespace superkilling::testing;

namespace {

ChartPtr a_chart() {
  static ChartPtr c = Chart::create("CA", {"t"}, {"xi1", "xi2"});
  return c;
}
ChartPtr b_chart() {
  static ChartPtr c = Chart::create("CB", {"s"}, {"eta1", "eta2"});
  return c;
}

SuperFunction coord(const ChartPtr& c, std::size_t i) {
  return SuperFunction::coordinate(c, i);
}

// s = t, eta1 = c xi1, eta2 = xi2
CoordinateChange odd_scaling(const Rational& c) {
  std::vector<SuperFunction> fwd{
      SuperFunction::scalar(a_chart(), ScalarExpr::symbol("t")),
      coord(a_chart(), 1).scale(ScalarExpr(c)),
      coord(a_chart(), 2)};
  std::vector<SuperFunction> bwd{
      SuperFunction::scalar(b_chart(), ScalarExpr::symbol("s")),
      coord(b_chart(), 1).scale(ScalarExpr(1 / c)),
      coord(b_chart(), 2)};
  return CoordinateChange(a_chart(), b_chart(), fwd, bwd);
}

MetricTensor flat_metric(const ChartPtr& chart, const Rational& odd_scale) {
  std::vector<SuperFunction> comps(9, SuperFunction::zero(chart));
  comps[0] = SuperFunction::one(chart);
  comps[1 * 3 + 2] = SuperFunction::constant(chart, -odd_scale);
  comps[2 * 3 + 1] = SuperFunction::constant(chart, odd_scale);
  return MetricTensor(chart, comps);
}

}  // namespace

TEST_CASE("jacobian entries and parities") {
  SUBCASE("identity change") {
    std::vector<SuperFunction> imgs{coord(a_chart(), 0), coord(a_chart(), 1),
                                    coord(a_chart(), 2)};
    CoordinateChange id(a_chart(), a_chart(), imgs, imgs);
    SuperMatrix j = jacobian(id);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        CHECK(j.at(r, c) == (r == c ? SuperFunction::one(a_chart())
                                    : SuperFunction::zero(a_chart())));
    CHECK(berezinian(j) == SuperFunction::one(a_chart()));
  }

  SUBCASE("constant odd scaling gives a diagonal Jacobian") {
    CoordinateChange c = odd_scaling(Rational(3));
    SuperMatrix j = jacobian(c);
    CHECK(j.at(0, 0) == SuperFunction::one(a_chart()));
    CHECK(j.at(1, 1) == SuperFunction::constant(a_chart(), Rational(3)));
    CHECK(j.at(2, 2) == SuperFunction::one(a_chart()));
    CHECK(j.at(1, 0).is_zero());
  }

  SUBCASE("odd shear puts an odd entry in the mixed block") {
    // (t, xi1, xi2) -> (t, xi1 + t xi2, xi2)
    ScalarExpr t = ScalarExpr::symbol("t");
    std::vector<SuperFunction> fwd{coord(a_chart(), 0),
                                   coord(a_chart(), 1) +
                                       coord(a_chart(), 2).scale(t),
                                   coord(a_chart(), 2)};
    ScalarExpr s = ScalarExpr::symbol("s");
    std::vector<SuperFunction> bwd{coord(b_chart(), 0),
                                   coord(b_chart(), 1) -
                                       coord(b_chart(), 2).scale(s),
                                   coord(b_chart(), 2)};
    CoordinateChange c(a_chart(), b_chart(), fwd, bwd);
    SuperMatrix j = jacobian(c);
    // d(xi1 + t xi2)/dt = xi2 sits in the odd-row, even-column block
    CHECK(j.at(1, 0) == coord(a_chart(), 2));
    CHECK(j.at(1, 1) == SuperFunction::one(a_chart()));
    CHECK(j.at(1, 2) == SuperFunction::scalar(a_chart(), t));
    validate_even_format(j);
  }
}

TEST_CASE("pullback is a parity preserving ring homomorphism") {
  SUBCASE("coordinates pull back to their images") {
    CoordinateChange c = odd_scaling(Rational(2));
    CHECK(pullback(c, coord(b_chart(), 1)) ==
          coord(a_chart(), 1).scale(ScalarExpr(2L)));
  }

  SUBCASE("odd swap produces the transposition sign") {
    std::vector<SuperFunction> fwd{coord(a_chart(), 0), coord(a_chart(), 2),
                                   coord(a_chart(), 1)};
    CoordinateChange swap(a_chart(), b_chart(), fwd);
    SuperFunction pulled =
        pullback(swap, coord(b_chart(), 1) * coord(b_chart(), 2));
    CHECK(pulled == -(coord(a_chart(), 1) * coord(a_chart(), 2)));
  }

  SUBCASE("even rescaling of a rational coefficient") {
    // s = 2t pulls s^-2 back to (1/4) t^-2
    ScalarExpr t = ScalarExpr::symbol("t");
    std::vector<SuperFunction> fwd{
        SuperFunction::scalar(a_chart(), ScalarExpr(2L) * t),
        coord(a_chart(), 1), coord(a_chart(), 2)};
    CoordinateChange c(a_chart(), b_chart(), fwd);
    ScalarExpr s = ScalarExpr::symbol("s");
    SuperFunction f = SuperFunction::scalar(b_chart(), (s * s).invert());
    CHECK(pullback(c, f) ==
          SuperFunction::scalar(
              a_chart(), (ScalarExpr(4L) * t * t).invert()));
  }

  SUBCASE("nilpotent shifts of even coordinates expand by Taylor") {
    // s = t + xi1 xi2: s^2 -> t^2 + 2 t xi1 xi2, 1/s -> 1/t - xi1xi2/t^2
    ScalarExpr t = ScalarExpr::symbol("t");
    SuperFunction soul = coord(a_chart(), 1) * coord(a_chart(), 2);
    std::vector<SuperFunction> fwd{
        SuperFunction::scalar(a_chart(), t) + soul, coord(a_chart(), 1),
        coord(a_chart(), 2)};
    CoordinateChange c(a_chart(), b_chart(), fwd);
    ScalarExpr s = ScalarExpr::symbol("s");
    CHECK(pullback(c, SuperFunction::scalar(b_chart(), s * s)) ==
          SuperFunction::scalar(a_chart(), t * t) +
              soul.scale(ScalarExpr(2L) * t));
    CHECK(pullback(c, SuperFunction::scalar(b_chart(), s.invert())) ==
          SuperFunction::scalar(a_chart(), t.invert()) -
              soul.scale((t * t).invert()));
    // homomorphism on products
    SuperFunction u = SuperFunction::scalar(b_chart(), s) +
                      coord(b_chart(), 1).scale(s * s);
    SuperFunction v = coord(b_chart(), 2) + SuperFunction::one(b_chart());
    CHECK(pullback(c, u * v) == pullback(c, u) * pullback(c, v));
  }

  SUBCASE("sin of a shifted argument") {
    ScalarExpr t = ScalarExpr::symbol("t");
    SuperFunction soul = coord(a_chart(), 1) * coord(a_chart(), 2);
    std::vector<SuperFunction> fwd{
        SuperFunction::scalar(a_chart(), t) + soul, coord(a_chart(), 1),
        coord(a_chart(), 2)};
    CoordinateChange c(a_chart(), b_chart(), fwd);
    ScalarExpr s = ScalarExpr::symbol("s");
    CHECK(pullback(c, SuperFunction::scalar(b_chart(), sin(s))) ==
          SuperFunction::scalar(a_chart(), sin(t)) + soul.scale(cos(t)));
  }
}

TEST_CASE("declared inverses are verified") {
  ScalarExpr t = ScalarExpr::symbol("t");
  std::vector<SuperFunction> fwd{
      SuperFunction::scalar(a_chart(), ScalarExpr(2L) * t),
      coord(a_chart(), 1), coord(a_chart(), 2)};
  ScalarExpr s = ScalarExpr::symbol("s");
  std::vector<SuperFunction> bad{
      SuperFunction::scalar(b_chart(), s),  // wrong inverse
      coord(b_chart(), 1), coord(b_chart(), 2)};
  CHECK_THROWS_AS(CoordinateChange(a_chart(), b_chart(), fwd, bad),
                  InvalidArgumentError);
  std::vector<SuperFunction> good{
      SuperFunction::scalar(b_chart(), ScalarExpr(Rational(1, 2)) * s),
      coord(b_chart(), 1), coord(b_chart(), 2)};
  CHECK_NOTHROW(CoordinateChange(a_chart(), b_chart(), fwd, good));
}

TEST_CASE("square root composite collapses through sqrt reduction") {
  // s = t^2 with inverse t = sqrt(s) on a positive box
  ChartPtr a = Chart::create("CAq", {"t"}, {"x1", "x2"}, {{0.5, 2.0}});
  ChartPtr b = Chart::create("CBq", {"s"}, {"y1", "y2"}, {{0.25, 4.0}});
  ScalarExpr t = ScalarExpr::symbol("t");
  ScalarExpr s = ScalarExpr::symbol("s");
  std::vector<SuperFunction> fwd{SuperFunction::scalar(a, t * t),
                                 SuperFunction::coordinate(a, 1),
                                 SuperFunction::coordinate(a, 2)};
  std::vector<SuperFunction> bwd{SuperFunction::scalar(b, sqrt(s)),
                                 SuperFunction::coordinate(b, 1),
                                 SuperFunction::coordinate(b, 2)};
  CoordinateChange c(a, b, fwd, bwd);
  CHECK(c.has_inverse());

  // transform d/dt: components 2t, re-expressed as 2 sqrt(s)
  VectorField dt = VectorField::coordinate(a, 0);
  VectorField pushed = transform_vector(c, dt);
  CHECK(pushed.component(0) ==
        SuperFunction::scalar(b, ScalarExpr(2L) * sqrt(s)));
  CHECK(pushed.component(1).is_zero());
}

TEST_CASE("transform_vector matches the chain rule") {
  CoordinateChange c = odd_scaling(Rational(2));
  VectorField dxi1 = VectorField::coordinate(a_chart(), 1);
  VectorField pushed = transform_vector(c, dxi1);
  // d/dxi1 = 2 d/deta1 after the rescaling eta1 = 2 xi1
  CHECK(pushed.component(1) ==
        SuperFunction::constant(b_chart(), Rational(2)));
  CHECK(pushed.component(0).is_zero());
  CHECK(pushed.component(2).is_zero());
}

TEST_CASE("metric transformation") {
  SUBCASE("identity change preserves components") {
    std::vector<SuperFunction> imgs{coord(a_chart(), 0), coord(a_chart(), 1),
                                    coord(a_chart(), 2)};
    CoordinateChange id(a_chart(), a_chart(), imgs, imgs);
    MetricTensor g = flat_metric(a_chart(), Rational(1));
    MetricTensor back = transform_metric(id, g);
    for (std::size_t i = 0; i < 9; ++i)
      CHECK(back.components()[i] == g.components()[i]);
  }

  SUBCASE("odd scaling scales the odd block") {
    CoordinateChange c = odd_scaling(Rational(3));
    MetricTensor g = flat_metric(b_chart(), Rational(1));
    MetricTensor pulled = transform_metric(c, g);
    CHECK(pulled.at(0, 0) == SuperFunction::one(a_chart()));
    CHECK(pulled.at(2, 1) == SuperFunction::constant(a_chart(), Rational(3)));
    CHECK(pulled.at(1, 2) == SuperFunction::constant(a_chart(), Rational(-3)));
  }

  SUBCASE("agrees with the fiber-substitution oracle") {
    RandomSource rnd(991);
    // a nonlinear change with odd shear
    ScalarExpr t = ScalarExpr::symbol("t");
    std::vector<SuperFunction> fwd{
        SuperFunction::scalar(a_chart(), t + ScalarExpr(1L)) +
            (coord(a_chart(), 1) * coord(a_chart(), 2)).scale(ScalarExpr(2L)),
        coord(a_chart(), 1) + coord(a_chart(), 2).scale(t * t),
        coord(a_chart(), 2)};
    CoordinateChange c(a_chart(), b_chart(), fwd);
    for (int trial = 0; trial < 5; ++trial) {
      MetricTensor g = rnd.metric(b_chart());
      MetricTensor direct = transform_metric(c, g);
      std::vector<SuperFunction> oracle = transform_metric_via_fibers(c, g);
      for (std::size_t i = 0; i < oracle.size(); ++i)
        CHECK(direct.components()[i] == oracle[i]);
    }
  }
}

TEST_CASE("berezinian of a composite is the product of berezinians") {
  ScalarExpr t = ScalarExpr::symbol("t");
  std::vector<SuperFunction> f1{
      SuperFunction::scalar(a_chart(), t + t * t),
      coord(a_chart(), 1) + coord(a_chart(), 2).scale(t),
      coord(a_chart(), 2)};
  CoordinateChange c1(a_chart(), b_chart(), f1);
  ScalarExpr s = ScalarExpr::symbol("s");
  ChartPtr cc = Chart::create("CC", {"u"}, {"z1", "z2"});
  std::vector<SuperFunction> f2{
      SuperFunction::scalar(b_chart(), s * s),
      coord(b_chart(), 1).scale(ScalarExpr(2L)),
      coord(b_chart(), 2) + coord(b_chart(), 1).scale(s)};
  CoordinateChange c2(b_chart(), cc, f2);
  // compose: images of c2 pulled through c1
  std::vector<SuperFunction> f12;
  for (const auto& img : c2.images()) f12.push_back(pullback(c1, img));
  CoordinateChange c12(a_chart(), cc, f12);
  SuperFunction lhs = berezinian(jacobian(c12));
  SuperFunction rhs = pullback(c1, berezinian(jacobian(c2))) *
                      berezinian(jacobian(c1));
  SamplingOptions opts;
  ZeroCheck z = check_zero(lhs - rhs, opts);
  CHECK(z.verdict == Verdict::Zero);
}

TEST_CASE("divergence and pairing are chart independent") {
  ChartPtr a = Chart::create("CAi", {"t"}, {"x1", "x2"}, {{0.5, 2.0}});
  ChartPtr b = Chart::create("CBi", {"s"}, {"y1", "y2"}, {{0.25, 4.0}});
  ScalarExpr t = ScalarExpr::symbol("t");
  ScalarExpr s = ScalarExpr::symbol("s");
  std::vector<SuperFunction> fwd{SuperFunction::scalar(a, t * t),
                                 SuperFunction::coordinate(a, 1),
                                 SuperFunction::coordinate(a, 2)};
  std::vector<SuperFunction> bwd{SuperFunction::scalar(b, sqrt(s)),
                                 SuperFunction::coordinate(b, 1),
                                 SuperFunction::coordinate(b, 2)};
  CoordinateChange c(a, b, fwd, bwd);
  RandomSource rnd(5);
  SamplingOptions opts;

  for (Parity p : {Parity::Even, Parity::Odd}) {
    VectorField x = rnd.field(a, p);
    VectorField x_b = transform_vector(c, x);
    BerezinVolume rho(a, SuperFunction::one(a));
    BerezinVolume rho_b = transform_volume(c, rho);
    SuperFunction div_a = divergence(rho, x);
    SuperFunction div_b = divergence(rho_b, x_b);
    ZeroCheck z = check_zero(div_a - pullback(c, div_b), opts);
    CHECK(z.verdict == Verdict::Zero);
  }

  // pairing invariance
  MetricTensor g_b = rnd.metric(b);
  MetricTensor g_a = transform_metric(c, g_b);
  VectorField x = rnd.field(a, Parity::Even);
  VectorField y = rnd.field(a, Parity::Odd);
  SuperFunction paired_a = pairing(g_a, x, y);
  SuperFunction paired_b =
      pairing(g_b, transform_vector(c, x), transform_vector(c, y));
  ZeroCheck z = check_zero(paired_a - pullback(c, paired_b), opts);
  CHECK(z.verdict == Verdict::Zero);
}
