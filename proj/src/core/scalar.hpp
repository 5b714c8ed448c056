#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "core/poly.hpp"

namespace superkilling {

enum class GenKind { Symbol, Sin, Cos, Exp, Log, Sqrt };

/// Symbolic expression in even-coordinate symbols: a reduced fraction of
/// multivariate polynomials over Q whose variables are either coordinate
/// symbols or interned function atoms sin(u), cos(u), exp(u), log(u),
/// sqrt(u) with a ScalarExpr argument. Canonical form: gcd-reduced,
/// lex-monic denominator, and no monomial carries a sqrt atom with
/// exponent >= 2 (sqrt(u)^2 rewrites to u). Immutable after construction.
class ScalarExpr {
 public:
  ScalarExpr() = default;  // zero
  ScalarExpr(long v) : num_(v), den_(1) {}
  ScalarExpr(const Rational& v) : num_(v), den_(1) {}
  static ScalarExpr symbol(const std::string& name);
  static ScalarExpr generator(GenId g);
  static ScalarExpr make(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const;
  /// True when no function atom occurs anywhere (zero-testing is exact).
  bool is_rational() const;

  ScalarExpr operator+(const ScalarExpr& o) const;
  ScalarExpr operator-(const ScalarExpr& o) const;
  ScalarExpr operator*(const ScalarExpr& o) const;
  ScalarExpr operator/(const ScalarExpr& o) const;
  ScalarExpr operator-() const;
  ScalarExpr invert() const;
  ScalarExpr pow(int k) const;

  /// Total derivative with respect to a coordinate symbol; chain rule
  /// through function atoms.
  ScalarExpr derivative(GenId symbol) const;

  /// Simultaneous substitution of coordinate symbols by expressions.
  ScalarExpr substitute(const std::map<GenId, ScalarExpr>& map) const;

  /// All coordinate symbols reachable, including through atom arguments.
  void collect_symbols(std::set<GenId>& out) const;

  /// Numeric evaluation; nullopt near a pole or outside a function domain.
  std::optional<double> eval(const std::map<GenId, double>& point) const;

  std::string to_string() const;

  bool operator==(const ScalarExpr& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const ScalarExpr& o) const { return !(*this == o); }

 private:
  Poly num_;       // zero expression: num 0, den 1
  Poly den_{1L};
};

ScalarExpr sin(const ScalarExpr& x);
ScalarExpr cos(const ScalarExpr& x);
ScalarExpr exp(const ScalarExpr& x);
ScalarExpr log(const ScalarExpr& x);
ScalarExpr sqrt(const ScalarExpr& x);

/// Interned generator table (append-only, shared across charts).
struct GeneratorInfo {
  GenKind kind;
  std::string name;       // symbols only
  const ScalarExpr* arg;  // atoms only
};

GenId intern_symbol(const std::string& name);
GenId intern_atom(GenKind kind, const ScalarExpr& arg);
const GeneratorInfo& generator_info(GenId g);
std::string generator_display(GenId g);

std::string poly_to_string(const Poly& p);

}  // namespace superkilling
