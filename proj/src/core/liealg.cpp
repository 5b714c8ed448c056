#include "core/liealg.hpp"

#include <sstream>

#include "core/errors.hpp"

namespace superkilling {

namespace {

Rational det_rational(std::vector<Rational> m, std::size_t n) {
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(m[pivot * n + col]) == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(m[pivot * n + j], m[col * n + j]);
      det = -det;
    }
    det *= m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(m[r * n + col]) == 0) continue;
      Rational f = m[r * n + col] / m[col * n + col];
      for (std::size_t j = col; j < n; ++j)
        m[r * n + j] -= f * m[col * n + j];
    }
  }
  return det;
}

std::string idx(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

LieAlgebraData::LieAlgebraData(std::size_t dim,
                               std::vector<Rational> structure_in,
                               std::vector<Rational> form_in)
    : dim_(dim),
      structure_(std::move(structure_in)),
      form_(std::move(form_in)) {
  if (dim_ == 0 || dim_ % 2 != 0)
    throw InvalidArgumentError("lie algebra dimension must be a positive "
                               "even number");
  if (structure_.size() != dim_ * dim_ * dim_ || form_.size() != dim_ * dim_)
    throw InvalidArgumentError("lie algebra data has the wrong shape");
  for (std::size_t c = 0; c < dim_; ++c)
    for (std::size_t b = 0; b < dim_; ++b)
      for (std::size_t a = 0; a < dim_; ++a)
        if (q(c, b, a) != -q(c, a, b))
          throw InvalidArgumentError("structure constants are not "
                                     "antisymmetric");
  for (std::size_t b = 0; b < dim_; ++b)
    for (std::size_t a = 0; a < dim_; ++a)
      if (form(b, a) != -form(a, b))
        throw InvalidArgumentError("form is not antisymmetric");
  if (sgn(det_rational(form_, dim_)) == 0)
    throw InvalidArgumentError("form is degenerate");
}

OddRealization build_homological(const LieAlgebraData& l) {
  std::vector<std::string> odds;
  for (std::size_t i = 0; i < l.dim(); ++i) odds.push_back("xi" + idx(i));
  ChartPtr chart = Chart::create("PiG" + std::to_string(l.dim()), {}, odds);
  std::vector<SuperFunction> comps(l.dim(), SuperFunction::zero(chart));
  // (1/2) xi^a xi^b q^c_{ba}: the coefficient of xi_a xi_b (a < b) is
  // q^c_{ba} by antisymmetry.
  for (std::size_t c = 0; c < l.dim(); ++c) {
    SuperFunction acc = SuperFunction::zero(chart);
    for (std::size_t a = 0; a < l.dim(); ++a)
      for (std::size_t b = a + 1; b < l.dim(); ++b) {
        const Rational& v = l.q(c, b, a);
        if (sgn(v) == 0) continue;
        OddMask mask = (OddMask{1} << a) | (OddMask{1} << b);
        acc = acc + SuperFunction::monomial(chart, mask, ScalarExpr(v));
      }
    comps[c] = acc;
  }
  return {chart, VectorField(chart, Parity::Odd, std::move(comps))};
}

MetricTensor form_metric(const LieAlgebraData& l, const ChartPtr& chart) {
  std::size_t d = l.dim();
  std::vector<SuperFunction> comps(d * d, SuperFunction::zero(chart));
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t a = 0; a < d; ++a)
      comps[b * d + a] = SuperFunction::scalar(chart, ScalarExpr(l.form(b, a)));
  return MetricTensor(chart, std::move(comps));
}

AlgebraicVerdict check_algebraic_killing(const LieAlgebraData& l) {
  AlgebraicVerdict v;
  std::size_t n = l.dim();
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        Rational acc(0);
        for (std::size_t c = 0; c < n; ++c)
          acc += l.q(c, d, a) * l.form(c, b) - l.q(c, d, b) * l.form(c, a);
        if (sgn(acc) != 0) {
          v.pass = false;
          std::ostringstream w;
          w << "q^c_{" << idx(d) << idx(a) << "} g_{c" << idx(b) << "} - q^c_{"
            << idx(d) << idx(b) << "} g_{c" << idx(a)
            << "} = " << acc.get_str();
          v.witnesses.push_back(w.str());
        }
      }
  return v;
}

AlgebraicVerdict check_unimodular_trace(const LieAlgebraData& l) {
  AlgebraicVerdict v;
  for (std::size_t d = 0; d < l.dim(); ++d) {
    Rational acc(0);
    for (std::size_t a = 0; a < l.dim(); ++a) acc += l.q(a, d, a);
    if (sgn(acc) != 0) {
      v.pass = false;
      v.witnesses.push_back("q^a_{" + idx(d) + "a} = " + acc.get_str());
    }
  }
  return v;
}

AlgebraicVerdict check_jacobi(const LieAlgebraData& l) {
  AlgebraicVerdict v;
  std::size_t n = l.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e) {
          Rational acc(0);
          for (std::size_t d = 0; d < n; ++d)
            acc += l.q(d, a, b) * l.q(e, d, c) + l.q(d, c, a) * l.q(e, d, b) +
                   l.q(d, b, c) * l.q(e, d, a);
          if (sgn(acc) != 0) {
            v.pass = false;
            v.witnesses.push_back("Jacobi fails on (" + idx(a) + "," + idx(b) +
                                  "," + idx(c) + ") -> e_" + idx(e));
          }
        }
  return v;
}

namespace {

std::vector<Rational> standard_symplectic(std::size_t dim) {
  std::vector<Rational> g(dim * dim, Rational(0));
  for (std::size_t i = 0; i + 1 < dim; i += 2) {
    g[i * dim + (i + 1)] = 1;
    g[(i + 1) * dim + i] = -1;
  }
  return g;
}

LieAlgebraData make_data(std::size_t dim,
                         const std::vector<std::tuple<std::size_t, std::size_t,
                                                      std::size_t, int>>& entries,
                         std::vector<Rational> form) {
  std::vector<Rational> q(dim * dim * dim, Rational(0));
  for (const auto& [c, b, a, v] : entries) {
    q[(c * dim + b) * dim + a] = v;
    q[(c * dim + a) * dim + b] = -v;
  }
  return LieAlgebraData(dim, std::move(q), std::move(form));
}

void visit(SearchOutcome& out, const LieAlgebraData& l) {
  ++out.total;
  bool jacobi = check_jacobi(l).pass;
  if (jacobi) ++out.jacobi_pass;
  bool killing = check_algebraic_killing(l).pass;
  bool trace = check_unimodular_trace(l).pass;
  if (jacobi && killing) {
    ++out.killing_pass;
    out.killing_fixtures.push_back({l, jacobi, killing, trace});
  }
  if (jacobi && trace) ++out.trace_pass;
  if (jacobi && killing && !trace) ++out.killing_not_trace;
  if (jacobi && trace && !killing) {
    ++out.trace_not_killing;
    if (out.separating_fixtures.size() < 8)
      out.separating_fixtures.push_back({l, jacobi, killing, trace});
  }
}

}  // namespace

SearchOutcome search_small_instances(std::size_t max_nonzero) {
  SearchOutcome out;
  // Dimension 2: both independent structure entries and the form sign.
  for (int q1 = -1; q1 <= 1; ++q1)
    for (int q2 = -1; q2 <= 1; ++q2)
      for (int gsign = -1; gsign <= 1; gsign += 2) {
        std::vector<Rational> form(4, Rational(0));
        form[0 * 2 + 1] = gsign;
        form[1 * 2 + 0] = -gsign;
        visit(out, make_data(2, {{0, 1, 0, q1}, {1, 1, 0, q2}}, form));
      }
  // Dimension 4: sparse structures (up to max_nonzero independent nonzero
  // entries, values +-1) against the standard symplectic form.
  const std::size_t dim = 4;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> slots;
  for (std::size_t b = 0; b < dim; ++b)
    for (std::size_t a = b + 1; a < dim; ++a)
      for (std::size_t c = 0; c < dim; ++c) slots.push_back({c, a, b});
  std::size_t ns = slots.size();
  // empty structure (abelian)
  visit(out, make_data(dim, {}, standard_symplectic(dim)));
  if (max_nonzero >= 1) {
    for (std::size_t i = 0; i < ns; ++i)
      for (int vi = -1; vi <= 1; vi += 2) {
        auto [c, a, b] = slots[i];
        visit(out, make_data(dim, {{c, a, b, vi}}, standard_symplectic(dim)));
      }
  }
  if (max_nonzero >= 2) {
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = i + 1; j < ns; ++j)
        for (int vi = -1; vi <= 1; vi += 2)
          for (int vj = -1; vj <= 1; vj += 2) {
            auto [ci, ai, bi] = slots[i];
            auto [cj, aj, bj] = slots[j];
            visit(out, make_data(dim, {{ci, ai, bi, vi}, {cj, aj, bj, vj}},
                                 standard_symplectic(dim)));
          }
  }
  return out;
}

}  // namespace superkilling
