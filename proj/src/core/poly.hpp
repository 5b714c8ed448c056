#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace superkilling {

using GenId = std::uint32_t;
using Rational = mpq_class;

/// Sparse exponent vector over generator ids, kept sorted by id.
/// The empty monomial is 1. Ordered lexicographically with the smallest
/// generator id as the most significant variable.
class Monomial {
 public:
  Monomial() = default;
  static Monomial var(GenId g, std::uint32_t e = 1);

  bool is_one() const { return exps_.empty(); }
  std::uint32_t degree_in(GenId g) const;
  std::uint32_t total_degree() const;
  const std::vector<std::pair<GenId, std::uint32_t>>& exps() const { return exps_; }

  Monomial operator*(const Monomial& o) const;
  Monomial pow(std::uint32_t k) const;
  bool divides(const Monomial& o) const;     // this | o
  Monomial divide_into(const Monomial& o) const;  // o / this, assumes divides
  Monomial erase_var(GenId g) const;

  bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
  bool operator!=(const Monomial& o) const { return exps_ != o.exps_; }
  bool operator<(const Monomial& o) const;

 private:
  std::vector<std::pair<GenId, std::uint32_t>> exps_;
};

/// Multivariate polynomial over Q, exact coefficients, sorted term map.
/// Zero coefficients are never stored.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  explicit Poly(long c);
  static Poly var(GenId g, std::uint32_t e = 1);
  static Poly term(const Monomial& m, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  Rational constant_value() const;  // requires is_constant()
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly scale(const Rational& c) const;
  Poly pow(std::uint32_t k) const;

  /// Formal partial derivative with respect to one generator.
  Poly derivative(GenId g) const;

  std::uint32_t degree_in(GenId g) const;
  void collect_gens(std::set<GenId>& out) const;

  /// View as a univariate polynomial in g: exponent -> coefficient.
  std::map<std::uint32_t, Poly> collect(GenId g) const;
  static Poly assemble(GenId g, const std::map<std::uint32_t, Poly>& coeffs);

  /// Largest term under the monomial order.
  const std::pair<const Monomial, Rational>& leading() const;

  double eval(const std::function<double(GenId)>& gen_value) const;

  static Poly gcd(const Poly& a, const Poly& b);
  static std::optional<Poly> try_exact_divide(const Poly& num, const Poly& div);
  static Poly exact_divide(const Poly& num, const Poly& div);

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return terms_ != o.terms_; }

 private:
  std::map<Monomial, Rational> terms_;
  void add_term(const Monomial& m, const Rational& c);
};

}  // namespace superkilling
