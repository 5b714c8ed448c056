#include "core/poly.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "core/errors.hpp"

namespace superkilling {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(GenId g, std::uint32_t e) {
  Monomial m;
  if (e > 0) m.exps_.push_back({g, e});
  return m;
}

std::uint32_t Monomial::degree_in(GenId g) const {
  for (const auto& [id, e] : exps_)
    if (id == g) return e;
  return 0;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& [id, e] : exps_) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.exps_.reserve(exps_.size() + o.exps_.size());
  std::size_t i = 0, j = 0;
  while (i < exps_.size() && j < o.exps_.size()) {
    if (exps_[i].first < o.exps_[j].first) {
      r.exps_.push_back(exps_[i++]);
    } else if (exps_[i].first > o.exps_[j].first) {
      r.exps_.push_back(o.exps_[j++]);
    } else {
      r.exps_.push_back({exps_[i].first, exps_[i].second + o.exps_[j].second});
      ++i;
      ++j;
    }
  }
  while (i < exps_.size()) r.exps_.push_back(exps_[i++]);
  while (j < o.exps_.size()) r.exps_.push_back(o.exps_[j++]);
  return r;
}

Monomial Monomial::pow(std::uint32_t k) const {
  Monomial r;
  if (k == 0) return r;
  r.exps_ = exps_;
  for (auto& [id, e] : r.exps_) e *= k;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  std::size_t j = 0;
  for (const auto& [id, e] : exps_) {
    while (j < o.exps_.size() && o.exps_[j].first < id) ++j;
    if (j >= o.exps_.size() || o.exps_[j].first != id || o.exps_[j].second < e)
      return false;
  }
  return true;
}

Monomial Monomial::divide_into(const Monomial& o) const {
  Monomial r;
  std::size_t i = 0;
  for (const auto& [id, e] : o.exps_) {
    std::uint32_t sub = 0;
    while (i < exps_.size() && exps_[i].first < id) ++i;
    if (i < exps_.size() && exps_[i].first == id) sub = exps_[i].second;
    assert(e >= sub);
    if (e > sub) r.exps_.push_back({id, e - sub});
  }
  return r;
}

Monomial Monomial::erase_var(GenId g) const {
  Monomial r;
  for (const auto& p : exps_)
    if (p.first != g) r.exps_.push_back(p);
  return r;
}

bool Monomial::operator<(const Monomial& o) const {
  // Lex order, smallest id most significant; higher exponent there wins.
  std::size_t i = 0, j = 0;
  while (i < exps_.size() || j < o.exps_.size()) {
    if (i >= exps_.size()) return true;   // o has an extra significant var
    if (j >= o.exps_.size()) return false;
    if (exps_[i].first != o.exps_[j].first)
      return exps_[i].first > o.exps_[j].first;
    if (exps_[i].second != o.exps_[j].second)
      return exps_[i].second < o.exps_[j].second;
    ++i;
    ++j;
  }
  return false;
}

// -------------------------------------------------------------------- Poly

Poly::Poly(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace(Monomial{}, c);
}

Poly::Poly(long c) {
  if (c != 0) terms_.emplace(Monomial{}, Rational(c));
}

Poly Poly::var(GenId g, std::uint32_t e) {
  Poly p;
  p.terms_.emplace(Monomial::var(g, e), Rational(1));
  return p;
}

Poly Poly::term(const Monomial& m, const Rational& c) {
  Poly p;
  if (sgn(c) != 0) p.terms_.emplace(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

bool Poly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_one() &&
         terms_.begin()->second == 1;
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  assert(is_constant());
  return terms_.begin()->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Poly Poly::scale(const Rational& c) const {
  Poly r;
  if (sgn(c) == 0) return r;
  for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
  return r;
}

Poly Poly::pow(std::uint32_t k) const {
  Poly r(Rational(1));
  Poly base = *this;
  while (k > 0) {
    if (k & 1u) r = r * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return r;
}

Poly Poly::derivative(GenId g) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.degree_in(g);
    if (e == 0) continue;
    Monomial dm = e == 1 ? m.erase_var(g) : m.erase_var(g) * Monomial::var(g, e - 1);
    r.add_term(dm, c * e);
  }
  return r;
}

std::uint32_t Poly::degree_in(GenId g) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(g));
  return d;
}

void Poly::collect_gens(std::set<GenId>& out) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [id, e] : m.exps()) out.insert(id);
}

std::map<std::uint32_t, Poly> Poly::collect(GenId g) const {
  std::map<std::uint32_t, Poly> r;
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.degree_in(g);
    r[e].add_term(m.erase_var(g), c);
  }
  return r;
}

Poly Poly::assemble(GenId g, const std::map<std::uint32_t, Poly>& coeffs) {
  Poly r;
  for (const auto& [e, p] : coeffs) {
    Poly xe = Poly::var(g, e);
    if (e == 0) xe = Poly(Rational(1));
    r += p * xe;
  }
  return r;
}

const std::pair<const Monomial, Rational>& Poly::leading() const {
  assert(!terms_.empty());
  return *terms_.rbegin();
}

double Poly::eval(const std::function<double(GenId)>& gen_value) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (const auto& [id, e] : m.exps()) {
      double v = gen_value(id);
      double p = 1.0;
      double base = v;
      std::uint32_t k = e;
      while (k > 0) {
        if (k & 1u) p *= base;
        k >>= 1;
        if (k > 0) base *= base;
      }
      t *= p;
    }
    acc += t;
  }
  return acc;
}

// ------------------------------------------------------------ exact divide

std::optional<Poly> Poly::try_exact_divide(const Poly& num, const Poly& div) {
  if (div.is_zero()) return std::nullopt;
  if (num.is_zero()) return Poly{};
  if (div.is_constant()) {
    Rational inv = 1 / div.constant_value();
    return num.scale(inv);
  }
  Poly r = num;
  Poly q;
  const auto& dl = div.leading();
  // Leading-term division cycle; exact divisions terminate because the
  // leading monomial strictly decreases.
  while (!r.is_zero()) {
    const auto& rl = r.leading();
    if (!dl.first.divides(rl.first)) return std::nullopt;
    Monomial qm = dl.first.divide_into(rl.first);
    Rational qc = rl.second / dl.second;
    Poly t = Poly::term(qm, qc);
    q += t;
    r -= t * div;
  }
  return q;
}

Poly Poly::exact_divide(const Poly& num, const Poly& div) {
  auto q = try_exact_divide(num, div);
  if (!q) throw Error("exact_divide: division is not exact");
  return *q;
}

// -------------------------------------------------------------------- gcd

namespace {

GenId smallest_gen(const Poly& a, const Poly& b) {
  GenId best = ~0u;
  for (const Poly* p : {&a, &b})
    for (const auto& [m, c] : p->terms())
      if (!m.exps().empty()) best = std::min(best, m.exps().front().first);
  return best;
}

// lc and degree of p viewed in variable g.
Poly lc_in(const Poly& p, GenId g, std::uint32_t deg) {
  Poly r;
  for (const auto& [m, c] : p.terms())
    if (m.degree_in(g) == deg) r += Poly::term(m.erase_var(g), c);
  return r;
}

// Pseudo-remainder of a by b in variable g: lc(b)^(da-db+1) * a mod b.
Poly prem(const Poly& a, const Poly& b, GenId g) {
  std::uint32_t db = b.degree_in(g);
  Poly lcb = lc_in(b, g, db);
  Poly r = a;
  std::int64_t e = static_cast<std::int64_t>(a.degree_in(g)) - db + 1;
  while (!r.is_zero()) {
    std::uint32_t dr = r.degree_in(g);
    if (dr < db) break;
    Poly lcr = lc_in(r, g, dr);
    Poly shift = dr == db ? Poly(Rational(1)) : Poly::var(g, dr - db);
    r = lcb * r - lcr * shift * b;
    --e;
  }
  if (e > 0) r = r * lcb.pow(static_cast<std::uint32_t>(e));
  return r;
}

Poly gcd_many(const std::vector<Poly>& ps) {
  Poly g;
  for (const Poly& p : ps) {
    if (p.is_zero()) continue;
    g = g.is_zero() ? p : Poly::gcd(g, p);
    if (g.is_constant()) return Poly(Rational(1));
  }
  return g.is_zero() ? Poly{} : g;
}

Poly content_in(const Poly& p, GenId g) {
  std::vector<Poly> cs;
  for (const auto& [e, c] : p.collect(g)) cs.push_back(c);
  return gcd_many(cs);
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() || b.is_constant()) return Poly(Rational(1));
  if (a == b) return a;

  GenId v = smallest_gen(a, b);
  std::uint32_t da = a.degree_in(v), db = b.degree_in(v);
  if (da == 0) return Poly::gcd(a, content_in(b, v));
  if (db == 0) return Poly::gcd(content_in(a, v), b);

  Poly ca = content_in(a, v);
  Poly cb = content_in(b, v);
  Poly ppa = exact_divide(a, ca);
  Poly ppb = exact_divide(b, cb);
  Poly cont = Poly::gcd(ca, cb);

  // Subresultant polynomial remainder sequence on the primitive parts.
  Poly f1 = ppa, f2 = ppb;
  if (f1.degree_in(v) < f2.degree_in(v)) std::swap(f1, f2);
  Poly g(Rational(1)), h(Rational(1));
  while (true) {
    std::uint32_t d = f1.degree_in(v) - f2.degree_in(v);
    Poly r = prem(f1, f2, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) {
      f2 = Poly(Rational(1));
      break;
    }
    f1 = f2;
    f2 = exact_divide(r, g * h.pow(d));
    g = lc_in(f1, v, f1.degree_in(v));
    if (d > 0) h = d == 1 ? g : exact_divide(g.pow(d), h.pow(d - 1));
  }
  if (f2.is_constant()) return cont;
  Poly pp = exact_divide(f2, content_in(f2, v));
  return cont * pp;
}

}  // namespace superkilling
