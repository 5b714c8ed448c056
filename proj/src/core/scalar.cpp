#include "core/scalar.hpp"

#include <cmath>
#include <deque>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "core/errors.hpp"

namespace superkilling {

// ------------------------------------------------------ generator registry

namespace {

struct Registry {
  std::deque<GeneratorInfo> infos;
  std::deque<std::unique_ptr<ScalarExpr>> args;
  std::unordered_map<std::string, GenId> by_key;
  mutable std::mutex mu;

  static Registry& instance() {
    static Registry r;
    return r;
  }
};

const char* kind_label(GenKind k) {
  switch (k) {
    case GenKind::Symbol: return "sym";
    case GenKind::Sin: return "sin";
    case GenKind::Cos: return "cos";
    case GenKind::Exp: return "exp";
    case GenKind::Log: return "log";
    case GenKind::Sqrt: return "sqrt";
  }
  return "?";
}

}  // namespace

GenId intern_symbol(const std::string& name) {
  Registry& r = Registry::instance();
  std::lock_guard<std::mutex> lock(r.mu);
  std::string key = std::string("sym:") + name;
  auto it = r.by_key.find(key);
  if (it != r.by_key.end()) return it->second;
  GenId id = static_cast<GenId>(r.infos.size());
  r.infos.push_back({GenKind::Symbol, name, nullptr});
  r.by_key.emplace(key, id);
  return id;
}

GenId intern_atom(GenKind kind, const ScalarExpr& arg) {
  Registry& r = Registry::instance();
  // to_string only reads already-interned generators; compute the key
  // before taking the lock.
  std::string key = std::string(kind_label(kind)) + ":" + arg.to_string();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.by_key.find(key);
  if (it != r.by_key.end()) return it->second;
  GenId id = static_cast<GenId>(r.infos.size());
  r.args.push_back(std::make_unique<ScalarExpr>(arg));
  r.infos.push_back({kind, "", r.args.back().get()});
  r.by_key.emplace(key, id);
  return id;
}

const GeneratorInfo& generator_info(GenId g) {
  Registry& r = Registry::instance();
  std::lock_guard<std::mutex> lock(r.mu);
  return r.infos.at(g);
}

std::string generator_display(GenId g) {
  const GeneratorInfo& info = generator_info(g);
  if (info.kind == GenKind::Symbol) return info.name;
  return std::string(kind_label(info.kind)) + "(" + info.arg->to_string() + ")";
}

// ------------------------------------------------------------ construction

ScalarExpr ScalarExpr::symbol(const std::string& name) {
  return generator(intern_symbol(name));
}

ScalarExpr ScalarExpr::generator(GenId g) {
  return make(Poly::var(g), Poly(1L));
}

namespace {

bool has_sqrt_square(const Poly& p) {
  for (const auto& [m, c] : p.terms())
    for (const auto& [id, e] : m.exps())
      if (e >= 2 && generator_info(id).kind == GenKind::Sqrt) return true;
  return false;
}

// Rewrite every sqrt(u)^e with e >= 2 as u^(e/2) * sqrt(u)^(e%2).
// Returns the result as a raw numerator/denominator pair (arguments u are
// fractions). One pass may introduce new reducible squares from shallower
// atoms; the caller loops to a fixed point.
std::pair<Poly, Poly> sqrt_reduce_pass(const Poly& p) {
  Poly num, den(1L);
  for (const auto& [m, c] : p.terms()) {
    Monomial base;
    Poly tnum(c), tden(1L);
    for (const auto& [id, e] : m.exps()) {
      const GeneratorInfo& info = generator_info(id);
      if (e >= 2 && info.kind == GenKind::Sqrt) {
        std::uint32_t k = e / 2;
        tnum = tnum * info.arg->num().pow(k);
        tden = tden * info.arg->den().pow(k);
        if (e % 2) base = base * Monomial::var(id);
      } else {
        base = base * Monomial::var(id, e);
      }
    }
    tnum = tnum * Poly::term(base, Rational(1));
    num = num * tden + tnum * den;
    den = den * tden;
  }
  return {num, den};
}

}  // namespace

ScalarExpr ScalarExpr::make(Poly num, Poly den) {
  if (den.is_zero()) throw DivisionByZeroError("scalar division by zero");
  int guard = 0;
  while (has_sqrt_square(num) || has_sqrt_square(den)) {
    auto [n1, d1] = sqrt_reduce_pass(num);
    auto [n2, d2] = sqrt_reduce_pass(den);
    num = n1 * d2;
    den = d1 * n2;
    if (den.is_zero())
      throw DivisionByZeroError("denominator vanishes under sqrt reduction");
    if (++guard > 64) throw Error("sqrt reduction did not terminate");
  }
  if (num.is_zero()) {
    ScalarExpr r;
    return r;
  }
  if (!den.is_constant()) {
    Poly g = Poly::gcd(num, den);
    if (!g.is_constant()) {
      num = Poly::exact_divide(num, g);
      den = Poly::exact_divide(den, g);
    }
  }
  // Lex-monic denominator fixes the representative.
  Rational lead = den.leading().second;
  if (lead != 1) {
    Rational inv = 1 / lead;
    num = num.scale(inv);
    den = den.scale(inv);
  }
  ScalarExpr r;
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  return r;
}

Rational ScalarExpr::constant_value() const {
  return num_.constant_value() / den_.constant_value();
}

bool ScalarExpr::is_rational() const {
  std::set<GenId> gens;
  num_.collect_gens(gens);
  den_.collect_gens(gens);
  for (GenId g : gens)
    if (generator_info(g).kind != GenKind::Symbol) return false;
  return true;
}

// -------------------------------------------------------------- arithmetic

ScalarExpr ScalarExpr::operator+(const ScalarExpr& o) const {
  if (den_ == o.den_) return make(num_ + o.num_, den_);
  return make(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ScalarExpr ScalarExpr::operator-(const ScalarExpr& o) const {
  if (den_ == o.den_) return make(num_ - o.num_, den_);
  return make(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

ScalarExpr ScalarExpr::operator*(const ScalarExpr& o) const {
  return make(num_ * o.num_, den_ * o.den_);
}

ScalarExpr ScalarExpr::operator/(const ScalarExpr& o) const {
  if (o.is_zero()) throw DivisionByZeroError("scalar division by zero");
  return make(num_ * o.den_, den_ * o.num_);
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr r = *this;
  r.num_ = -r.num_;
  return r;
}

ScalarExpr ScalarExpr::invert() const {
  if (is_zero()) throw DivisionByZeroError("inverting zero scalar");
  return make(den_, num_);
}

ScalarExpr ScalarExpr::pow(int k) const {
  if (k == 0) return ScalarExpr(1L);
  std::uint32_t e = static_cast<std::uint32_t>(k < 0 ? -k : k);
  ScalarExpr r = k < 0 ? invert() : *this;
  return make(r.num_.pow(e), r.den_.pow(e));
}

// -------------------------------------------------------------- derivative

namespace {

// d(generator)/d(symbol), memoized per call.
ScalarExpr gen_derivative(GenId g, GenId sym, std::map<GenId, ScalarExpr>& memo);

ScalarExpr poly_derivative(const Poly& p, GenId sym,
                           std::map<GenId, ScalarExpr>& memo) {
  std::set<GenId> gens;
  p.collect_gens(gens);
  ScalarExpr acc;
  for (GenId g : gens) {
    ScalarExpr dg = gen_derivative(g, sym, memo);
    if (dg.is_zero()) continue;
    acc = acc + ScalarExpr::make(p.derivative(g), Poly(1L)) * dg;
  }
  return acc;
}

ScalarExpr gen_derivative(GenId g, GenId sym, std::map<GenId, ScalarExpr>& memo) {
  auto it = memo.find(g);
  if (it != memo.end()) return it->second;
  const GeneratorInfo& info = generator_info(g);
  ScalarExpr r;
  if (info.kind == GenKind::Symbol) {
    r = g == sym ? ScalarExpr(1L) : ScalarExpr();
  } else {
    ScalarExpr darg = info.arg->derivative(sym);
    if (!darg.is_zero()) {
      ScalarExpr outer;
      switch (info.kind) {
        case GenKind::Sin: outer = cos(*info.arg); break;
        case GenKind::Cos: outer = -sin(*info.arg); break;
        case GenKind::Exp: outer = ScalarExpr::generator(g); break;
        case GenKind::Log: outer = info.arg->invert(); break;
        case GenKind::Sqrt:
          outer = (ScalarExpr(2L) * ScalarExpr::generator(g)).invert();
          break;
        default: throw Error("derivative: bad generator kind");
      }
      r = outer * darg;
    }
  }
  memo.emplace(g, r);
  return r;
}

}  // namespace

ScalarExpr ScalarExpr::derivative(GenId symbol) const {
  std::map<GenId, ScalarExpr> memo;
  ScalarExpr dn = poly_derivative(num_, symbol, memo);
  if (den_.is_one()) return dn;
  ScalarExpr dd = poly_derivative(den_, symbol, memo);
  ScalarExpr den = make(den_, Poly(1L));
  return (dn * den - make(num_, Poly(1L)) * dd) / (den * den);
}

// ------------------------------------------------------------- substitution

namespace {

ScalarExpr gen_value(GenId g, const std::map<GenId, ScalarExpr>& map,
                     std::map<GenId, ScalarExpr>& memo) {
  auto mit = memo.find(g);
  if (mit != memo.end()) return mit->second;
  const GeneratorInfo& info = generator_info(g);
  ScalarExpr r;
  if (info.kind == GenKind::Symbol) {
    auto it = map.find(g);
    r = it != map.end() ? it->second : ScalarExpr::generator(g);
  } else {
    ScalarExpr sub = info.arg->substitute(map);
    if (sub == *info.arg) {
      r = ScalarExpr::generator(g);
    } else {
      switch (info.kind) {
        case GenKind::Sin: r = sin(sub); break;
        case GenKind::Cos: r = cos(sub); break;
        case GenKind::Exp: r = exp(sub); break;
        case GenKind::Log: r = log(sub); break;
        case GenKind::Sqrt: r = sqrt(sub); break;
        default: throw Error("substitute: bad generator kind");
      }
    }
  }
  memo.emplace(g, r);
  return r;
}

ScalarExpr poly_substitute(const Poly& p, const std::map<GenId, ScalarExpr>& map,
                           std::map<GenId, ScalarExpr>& memo) {
  ScalarExpr acc;
  for (const auto& [m, c] : p.terms()) {
    ScalarExpr t{c};
    for (const auto& [id, e] : m.exps())
      t = t * gen_value(id, map, memo).pow(static_cast<int>(e));
    acc = acc + t;
  }
  return acc;
}

}  // namespace

ScalarExpr ScalarExpr::substitute(const std::map<GenId, ScalarExpr>& map) const {
  std::map<GenId, ScalarExpr> memo;
  ScalarExpr n = poly_substitute(num_, map, memo);
  if (den_.is_one()) return n;
  ScalarExpr d = poly_substitute(den_, map, memo);
  return n / d;
}

void ScalarExpr::collect_symbols(std::set<GenId>& out) const {
  std::set<GenId> gens;
  num_.collect_gens(gens);
  den_.collect_gens(gens);
  for (GenId g : gens) {
    const GeneratorInfo& info = generator_info(g);
    if (info.kind == GenKind::Symbol)
      out.insert(g);
    else
      info.arg->collect_symbols(out);
  }
}

// ------------------------------------------------------------------- eval

namespace {

std::optional<double> gen_eval(GenId g, const std::map<GenId, double>& point,
                               std::map<GenId, double>& memo) {
  auto mit = memo.find(g);
  if (mit != memo.end()) return mit->second;
  const GeneratorInfo& info = generator_info(g);
  double v;
  if (info.kind == GenKind::Symbol) {
    auto it = point.find(g);
    if (it == point.end()) return std::nullopt;
    v = it->second;
  } else {
    auto arg = info.arg->eval(point);
    if (!arg) return std::nullopt;
    switch (info.kind) {
      case GenKind::Sin: v = std::sin(*arg); break;
      case GenKind::Cos: v = std::cos(*arg); break;
      case GenKind::Exp: v = std::exp(*arg); break;
      case GenKind::Log:
        if (*arg <= 0) return std::nullopt;
        v = std::log(*arg);
        break;
      case GenKind::Sqrt:
        if (*arg < 0) return std::nullopt;
        v = std::sqrt(*arg);
        break;
      default: return std::nullopt;
    }
  }
  if (!std::isfinite(v)) return std::nullopt;
  memo.emplace(g, v);
  return v;
}

}  // namespace

std::optional<double> ScalarExpr::eval(const std::map<GenId, double>& point) const {
  std::map<GenId, double> memo;
  bool bad = false;
  auto resolve = [&](GenId g) -> double {
    auto v = gen_eval(g, point, memo);
    if (!v) {
      bad = true;
      return 0.0;
    }
    return *v;
  };
  double n = num_.eval(resolve);
  double d = den_.eval(resolve);
  if (bad || !std::isfinite(n) || !std::isfinite(d)) return std::nullopt;
  if (std::abs(d) < 1e-12) return std::nullopt;  // pole: resample signal
  return n / d;
}

// --------------------------------------------------------------- functions

namespace {

ScalarExpr apply_atom(GenKind kind, const ScalarExpr& x) {
  if (x.is_constant()) {
    Rational v = x.constant_value();
    switch (kind) {
      case GenKind::Sin:
        if (sgn(v) == 0) return ScalarExpr(0L);
        break;
      case GenKind::Cos:
        if (sgn(v) == 0) return ScalarExpr(1L);
        break;
      case GenKind::Exp:
        if (sgn(v) == 0) return ScalarExpr(1L);
        break;
      case GenKind::Log:
        if (v == 1) return ScalarExpr(0L);
        break;
      case GenKind::Sqrt: {
        if (sgn(v) >= 0) {
          // Exact rational square root when both parts are perfect squares.
          mpz_class nr, dr;
          if (mpz_perfect_square_p(v.get_num().get_mpz_t()) &&
              mpz_perfect_square_p(v.get_den().get_mpz_t())) {
            mpz_sqrt(nr.get_mpz_t(), v.get_num().get_mpz_t());
            mpz_sqrt(dr.get_mpz_t(), v.get_den().get_mpz_t());
            return ScalarExpr(Rational(nr, dr));
          }
        }
        break;
      }
      default: break;
    }
  }
  return ScalarExpr::generator(intern_atom(kind, x));
}

}  // namespace

ScalarExpr sin(const ScalarExpr& x) { return apply_atom(GenKind::Sin, x); }
ScalarExpr cos(const ScalarExpr& x) { return apply_atom(GenKind::Cos, x); }
ScalarExpr exp(const ScalarExpr& x) { return apply_atom(GenKind::Exp, x); }
ScalarExpr log(const ScalarExpr& x) { return apply_atom(GenKind::Log, x); }
ScalarExpr sqrt(const ScalarExpr& x) { return apply_atom(GenKind::Sqrt, x); }

// ---------------------------------------------------------------- printing

std::string poly_to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  // Leading term first.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    Rational c = it->second;
    bool neg = sgn(c) < 0;
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    first = false;
    Rational a = abs(c);
    const Monomial& m = it->first;
    bool coeff_shown = (a != 1) || m.is_one();
    if (coeff_shown) out << a.get_str();
    bool needs_star = coeff_shown;
    for (const auto& [id, e] : m.exps()) {
      if (needs_star) out << "*";
      out << generator_display(id);
      if (e > 1) out << "^" << e;
      needs_star = true;
    }
  }
  return out.str();
}

std::string ScalarExpr::to_string() const {
  if (den_.is_one()) return poly_to_string(num_);
  return "(" + poly_to_string(num_) + ")/(" + poly_to_string(den_) + ")";
}

}  // namespace superkilling
