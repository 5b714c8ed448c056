#include "core/superfun.hpp"

#include <sstream>

#include "core/errors.hpp"

namespace superkilling {

bool koszul_negative(OddMask a, OddMask b) {
  int inversions = 0;
  OddMask bb = b;
  while (bb) {
    int j = __builtin_ctzll(bb);
    bb &= bb - 1;
    inversions += __builtin_popcountll(a >> (j + 1));
  }
  return inversions & 1;
}

void require_same_chart(const SuperFunction& a, const SuperFunction& b) {
  if (a.chart() != b.chart())
    throw ChartMismatchError("operands live on different charts ('" +
                             (a.chart() ? a.chart()->name() : "?") + "' vs '" +
                             (b.chart() ? b.chart()->name() : "?") + "')");
}

// ------------------------------------------------------------ construction

SuperFunction SuperFunction::zero(ChartPtr chart) {
  SuperFunction f;
  f.chart_ = std::move(chart);
  return f;
}

SuperFunction SuperFunction::one(ChartPtr chart) {
  return constant(std::move(chart), Rational(1));
}

SuperFunction SuperFunction::constant(ChartPtr chart, const Rational& c) {
  return scalar(std::move(chart), ScalarExpr(c));
}

SuperFunction SuperFunction::scalar(ChartPtr chart, const ScalarExpr& c) {
  SuperFunction f = zero(std::move(chart));
  f.add_term(0, c);
  return f;
}

SuperFunction SuperFunction::odd_coordinate(ChartPtr chart,
                                            std::size_t odd_index) {
  if (odd_index >= chart->odd_dim())
    throw InvalidArgumentError("odd coordinate index out of range");
  SuperFunction f = zero(std::move(chart));
  f.add_term(OddMask{1} << odd_index, ScalarExpr(1L));
  return f;
}

SuperFunction SuperFunction::coordinate(ChartPtr chart, std::size_t coord) {
  if (coord >= chart->dim())
    throw InvalidArgumentError("coordinate index out of range");
  if (coord < chart->even_dim())
    return scalar(chart, ScalarExpr::generator(chart->even_symbol(coord)));
  return odd_coordinate(chart, coord - chart->even_dim());
}

SuperFunction SuperFunction::monomial(ChartPtr chart, OddMask mask,
                                      const ScalarExpr& c) {
  if (chart->odd_dim() < 64 && (mask >> chart->odd_dim()) != 0)
    throw InvalidArgumentError("odd monomial index out of range for chart");
  SuperFunction f = zero(std::move(chart));
  f.add_term(mask, c);
  return f;
}

void SuperFunction::add_term(OddMask m, const ScalarExpr& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    ScalarExpr s = it->second + c;
    if (s.is_zero())
      terms_.erase(it);
    else
      it->second = s;
  }
}

// ------------------------------------------------------------------ parity

std::optional<Parity> SuperFunction::parity() const {
  if (terms_.empty()) return Parity::Even;
  Parity p = mask_parity(terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (mask_parity(m) != p) return std::nullopt;
  return p;
}

bool SuperFunction::is_homogeneous(Parity p) const {
  for (const auto& [m, c] : terms_)
    if (mask_parity(m) != p) return false;
  return true;
}

SuperFunction SuperFunction::even_part() const {
  SuperFunction f = zero(chart_);
  for (const auto& [m, c] : terms_)
    if (mask_parity(m) == Parity::Even) f.terms_.emplace(m, c);
  return f;
}

SuperFunction SuperFunction::odd_part() const {
  SuperFunction f = zero(chart_);
  for (const auto& [m, c] : terms_)
    if (mask_parity(m) == Parity::Odd) f.terms_.emplace(m, c);
  return f;
}

ScalarExpr SuperFunction::body() const {
  auto it = terms_.find(0);
  return it == terms_.end() ? ScalarExpr() : it->second;
}

SuperFunction SuperFunction::soul() const {
  SuperFunction f = *this;
  f.terms_.erase(0);
  return f;
}

// -------------------------------------------------------------- arithmetic

SuperFunction SuperFunction::operator+(const SuperFunction& o) const {
  require_same_chart(*this, o);
  SuperFunction r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

SuperFunction SuperFunction::operator-(const SuperFunction& o) const {
  require_same_chart(*this, o);
  SuperFunction r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

SuperFunction SuperFunction::operator-() const {
  SuperFunction r = zero(chart_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

SuperFunction SuperFunction::operator*(const SuperFunction& o) const {
  require_same_chart(*this, o);
  SuperFunction r = zero(chart_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      if (ma & mb) continue;  // repeated odd generator
      ScalarExpr c = ca * cb;
      if (koszul_negative(ma, mb)) c = -c;
      r.add_term(ma | mb, c);
    }
  }
  return r;
}

SuperFunction SuperFunction::scale(const ScalarExpr& c) const {
  SuperFunction r = zero(chart_);
  if (c.is_zero()) return r;
  for (const auto& [m, coef] : terms_) r.add_term(m, coef * c);
  return r;
}

// ------------------------------------------------------------- derivatives

SuperFunction SuperFunction::partial(std::size_t coord) const {
  if (coord >= chart_->dim())
    throw InvalidArgumentError("partial: invalid coordinate index");
  SuperFunction r = zero(chart_);
  if (coord < chart_->even_dim()) {
    GenId sym = chart_->even_symbol(coord);
    for (const auto& [m, c] : terms_) r.add_term(m, c.derivative(sym));
    return r;
  }
  // Left odd derivative: bring the generator to the front, drop it.
  std::size_t k = coord - chart_->even_dim();
  OddMask bit = OddMask{1} << k;
  for (const auto& [m, c] : terms_) {
    if (!(m & bit)) continue;
    int before = __builtin_popcountll(m & (bit - 1));
    r.add_term(m & ~bit, (before & 1) ? -c : c);
  }
  return r;
}

// ------------------------------------------------------- inverse and sqrt

namespace {

// Truncated series sum_k coeff(k) * u^k, where u is nilpotent of minimal
// odd degree 2 on a chart with m odd coordinates.
SuperFunction nilpotent_series(const SuperFunction& u,
                               const std::function<Rational(int)>& coeff) {
  std::size_t m = u.chart()->odd_dim();
  int kmax = static_cast<int>(m / 2);
  SuperFunction acc = SuperFunction::constant(u.chart(), coeff(0));
  SuperFunction p = SuperFunction::one(u.chart());
  for (int k = 1; k <= kmax; ++k) {
    p = p * u;
    if (p.is_zero()) break;
    acc = acc + p.scale(ScalarExpr(coeff(k)));
  }
  return acc;
}

}  // namespace

SuperFunction SuperFunction::invert() const {
  if (!is_homogeneous(Parity::Even))
    throw ParityError("invert: input must be even");
  ScalarExpr f0 = body();
  if (f0.is_zero())
    throw DivisionByZeroError("invert: body is identically zero");
  ScalarExpr inv0 = f0.invert();
  SuperFunction u = soul().scale(inv0);  // n / f0
  SuperFunction series = nilpotent_series(
      u, [](int k) { return (k & 1) ? Rational(-1) : Rational(1); });
  return series.scale(inv0);
}

SuperFunction SuperFunction::sqrt_even() const {
  if (!is_homogeneous(Parity::Even))
    throw ParityError("sqrt_even: input must be even");
  ScalarExpr f0 = body();
  if (f0.is_zero())
    throw DivisionByZeroError("sqrt_even: body is identically zero");
  SuperFunction u = soul().scale(f0.invert());
  // binom(1/2, k)
  SuperFunction series = nilpotent_series(u, [](int k) {
    Rational c(1);
    Rational half(1, 2);
    for (int i = 0; i < k; ++i) c *= (half - i) / (i + 1);
    return c;
  });
  return series.scale(sqrt(f0));
}

SuperFunction apply_function(GenKind kind, const SuperFunction& f) {
  if (!f.is_homogeneous(Parity::Even))
    throw ParityError("analytic function of a non-even superfunction");
  if (kind == GenKind::Sqrt) return f.sqrt_even();
  ScalarExpr b = f.body();
  SuperFunction n = f.soul();
  // Taylor around the body; derivatives in a scratch symbol.
  static const GenId z = intern_symbol("__taylor_z");
  ScalarExpr expr;
  switch (kind) {
    case GenKind::Sin: expr = sin(ScalarExpr::generator(z)); break;
    case GenKind::Cos: expr = cos(ScalarExpr::generator(z)); break;
    case GenKind::Exp: expr = exp(ScalarExpr::generator(z)); break;
    case GenKind::Log: expr = log(ScalarExpr::generator(z)); break;
    default: throw Error("apply_function: bad kind");
  }
  std::size_t m = f.chart()->odd_dim();
  int kmax = static_cast<int>(m / 2);
  std::map<GenId, ScalarExpr> at_body{{z, b}};
  SuperFunction acc =
      SuperFunction::scalar(f.chart(), expr.substitute(at_body));
  SuperFunction p = SuperFunction::one(f.chart());
  Rational factorial(1);
  for (int k = 1; k <= kmax; ++k) {
    p = p * n;
    if (p.is_zero()) break;
    factorial *= k;
    expr = expr.derivative(z);
    ScalarExpr coeff = expr.substitute(at_body) * ScalarExpr(Rational(1) / factorial);
    acc = acc + p.scale(coeff);
  }
  return acc;
}

// ---------------------------------------------------------------- utility

SuperFunction SuperFunction::on_chart(ChartPtr chart) const {
  std::size_t common = std::min(chart->even_dim(), chart_->even_dim());
  for (std::size_t i = 0; i < common; ++i)
    if (chart->even_symbol(i) != chart_->even_symbol(i))
      throw ChartMismatchError("on_chart: incompatible even coordinates");
  if (chart->even_dim() < chart_->even_dim()) {
    // Shrinking: the coefficients must not mention the dropped symbols.
    std::set<GenId> used;
    for (const auto& [m, c] : terms_) c.collect_symbols(used);
    for (std::size_t i = chart->even_dim(); i < chart_->even_dim(); ++i)
      if (used.count(chart_->even_symbol(i)))
        throw ChartMismatchError("on_chart: coefficient uses symbol '" +
                                 chart_->coord_name(i) +
                                 "' absent from the new chart");
  }
  SuperFunction f;
  f.chart_ = std::move(chart);
  for (const auto& [m, c] : terms_) {
    if (f.chart_->odd_dim() < 64 && (m >> f.chart_->odd_dim()) != 0)
      throw ChartMismatchError("on_chart: odd monomial out of range");
    f.terms_.emplace(m, c);
  }
  return f;
}

bool SuperFunction::operator==(const SuperFunction& o) const {
  return chart_ == o.chart_ && terms_ == o.terms_;
}

std::string SuperFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    bool unit = c.is_one();
    if (!unit || m == 0) out << "(" << c.to_string() << ")";
    OddMask mm = m;
    bool star = !unit || m == 0;
    while (mm) {
      int k = __builtin_ctzll(mm);
      mm &= mm - 1;
      if (star) out << "*";
      out << chart_->coord_name(chart_->even_dim() + k);
      star = true;
    }
  }
  return out.str();
}

}  // namespace superkilling
