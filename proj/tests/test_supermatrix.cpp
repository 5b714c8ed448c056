#include <doctest.h>

#include <random>

#include "core/supermatrix.hpp"

using namespace superkilling;

namespace {

ChartPtr chart() {
  static ChartPtr c = Chart::create("Rm", {"t"}, {"xi1", "xi2"});
  return c;
}

// Random even-format numeric supermatrix over 4 auxiliary generators.
NumericSuperMatrix random_even(std::size_t n, std::size_t m,
                               std::mt19937_64& rng, bool dominant_diag) {
  const int gens = 4;
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Parity> par;
  for (std::size_t i = 0; i < n; ++i) par.push_back(Parity::Even);
  for (std::size_t i = 0; i < m; ++i) par.push_back(Parity::Odd);
  NumericSuperMatrix a(par, par, NumericSuperValue(gens));
  for (std::size_t r = 0; r < n + m; ++r)
    for (std::size_t c = 0; c < n + m; ++c) {
      Parity want = par[r] + par[c];
      NumericSuperValue v(gens);
      for (OddMask mask = 0; mask < (OddMask{1} << gens); ++mask)
        if (mask_parity(mask) == want) v.at(mask) = dist(rng);
      if (dominant_diag && r == c) v.at(0) += 3.0;
      a.at(r, c) = v;
    }
  return a;
}

double max_abs_diff(const NumericSuperValue& a, const NumericSuperValue& b) {
  return (a - b).max_abs();
}

}  // namespace

TEST_CASE("supertranspose block map") {
  // Identity is fixed.
  std::vector<Parity> par{Parity::Even, Parity::Odd, Parity::Odd};
  SuperMatrix id =
      SuperMatrix::identity(par, SuperFunction::zero(chart()));
  SuperMatrix idt = supertranspose(id);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(idt.at(r, c) == id.at(r, c));

  // Purely even matrices transpose plainly.
  std::vector<Parity> epar{Parity::Even, Parity::Even};
  SuperMatrix m(epar, epar, SuperFunction::zero(chart()));
  m.at(0, 1) = SuperFunction::constant(chart(), Rational(5));
  SuperMatrix mt = supertranspose(m);
  CHECK(mt.at(1, 0) == m.at(0, 1));
  CHECK(mt.at(0, 1).is_zero());

  // The even-odd block flips sign, applying it twice does not return to
  // the start on that block.
  SuperMatrix s(par, par, SuperFunction::zero(chart()));
  s.at(0, 1) = SuperFunction::odd_coordinate(chart(), 0);
  SuperMatrix st = supertranspose(s);
  CHECK(st.at(1, 0) == -SuperFunction::odd_coordinate(chart(), 0));
}

TEST_CASE("berezinian of block examples") {
  std::vector<Parity> par{Parity::Even, Parity::Odd, Parity::Odd};
  SuperMatrix id = SuperMatrix::identity(par, SuperFunction::zero(chart()));
  CHECK(berezinian(id) == SuperFunction::one(chart()));

  // diag(1; [[0,1],[-1,0]]) has Berezinian det(P)/det(S) = 1/1
  SuperMatrix g(par, par, SuperFunction::zero(chart()));
  g.at(0, 0) = SuperFunction::one(chart());
  g.at(1, 2) = SuperFunction::one(chart());
  g.at(2, 1) = -SuperFunction::one(chart());
  CHECK(berezinian(g) == SuperFunction::one(chart()));

  // scale the even block
  ScalarExpr t = ScalarExpr::symbol("t");
  g.at(0, 0) = SuperFunction::scalar(chart(), t * t);
  CHECK(berezinian(g) == SuperFunction::scalar(chart(), t * t));

  // and the odd block: S = [[0,a],[-a,0]] contributes det(S) = a^2
  g.at(1, 2) = SuperFunction::scalar(chart(), t);
  g.at(2, 1) = SuperFunction::scalar(chart(), -t);
  CHECK(berezinian(g) == SuperFunction::one(chart()));

  // m = 0 reduces to det
  std::vector<Parity> epar{Parity::Even, Parity::Even};
  SuperMatrix p(epar, epar, SuperFunction::zero(chart()));
  p.at(0, 0) = SuperFunction::constant(chart(), Rational(2));
  p.at(1, 1) = SuperFunction::constant(chart(), Rational(3));
  p.at(0, 1) = SuperFunction::one(chart());
  CHECK(berezinian(p) == SuperFunction::constant(chart(), Rational(6)));

  // singular odd-odd body is rejected
  SuperMatrix bad(par, par, SuperFunction::zero(chart()));
  bad.at(0, 0) = SuperFunction::one(chart());
  bad.at(1, 2) = SuperFunction::odd_coordinate(chart(), 0) *
                 SuperFunction::odd_coordinate(chart(), 1);
  CHECK_THROWS_AS(berezinian(bad), SingularMatrixError);
}

TEST_CASE("block inverse of an even supermatrix") {
  std::vector<Parity> par{Parity::Even, Parity::Odd, Parity::Odd};
  SuperMatrix g(par, par, SuperFunction::zero(chart()));
  g.at(0, 0) = SuperFunction::one(chart());
  g.at(1, 2) = SuperFunction::one(chart());
  g.at(2, 1) = -SuperFunction::one(chart());
  // couple the blocks with odd entries
  g.at(0, 1) = SuperFunction::odd_coordinate(chart(), 0);
  g.at(1, 0) = SuperFunction::odd_coordinate(chart(), 1);
  SuperMatrix w = inverse(g);
  SuperMatrix prod = g * w;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      SuperFunction want = r == c ? SuperFunction::one(chart())
                                  : SuperFunction::zero(chart());
      CHECK(prod.at(r, c) == want);
    }
  SuperMatrix prod2 = w * g;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      SuperFunction want = r == c ? SuperFunction::one(chart())
                                  : SuperFunction::zero(chart());
      CHECK(prod2.at(r, c) == want);
    }
}

TEST_CASE("numeric berezinian properties on random 2|2 supermatrices") {
  std::mt19937_64 rng(2024);
  int done = 0;
  for (int trial = 0; done < 100 && trial < 500; ++trial) {
    NumericSuperMatrix a = random_even(2, 2, rng, true);
    NumericSuperMatrix b = random_even(2, 2, rng, true);
    NumericSuperValue ba = berezinian(a);
    // Ber(A^st) = Ber(A)
    CHECK(max_abs_diff(berezinian(supertranspose(a)), ba) < 1e-12);
    // Ber(AB) = Ber(A) Ber(B)
    NumericSuperValue bb = berezinian(b);
    NumericSuperValue bab = berezinian(a * b);
    CHECK(max_abs_diff(bab, ba * bb) < 1e-9);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("supertrace") {
  std::vector<Parity> par{Parity::Even, Parity::Odd, Parity::Odd};
  SuperMatrix m(par, par, SuperFunction::zero(chart()));
  m.at(0, 0) = SuperFunction::constant(chart(), Rational(7));
  m.at(1, 1) = SuperFunction::constant(chart(), Rational(2));
  m.at(2, 2) = SuperFunction::constant(chart(), Rational(1));
  CHECK(supertrace(m) == SuperFunction::constant(chart(), Rational(4)));
}
