#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "core/chart.hpp"
#include "core/scalar.hpp"

namespace superkilling {

/// Odd monomial of a chart as a bitmask over odd-coordinate indices;
/// bit k stands for the k-th odd generator. Strictly increasing index
/// order is the canonical order of the product.
using OddMask = std::uint64_t;

inline Parity mask_parity(OddMask m) {
  return static_cast<Parity>(__builtin_popcountll(m) & 1);
}

/// Sign (-1)^inversions picked up merging two ascending odd monomials.
bool koszul_negative(OddMask a, OddMask b);

/// Element of C^inf on a chart: finite sum of odd monomials with
/// ScalarExpr coefficients in the even coordinates. Zero coefficients are
/// pruned after every operation. Immutable value type.
class SuperFunction {
 public:
  SuperFunction() = default;
  static SuperFunction zero(ChartPtr chart);
  static SuperFunction one(ChartPtr chart);
  static SuperFunction constant(ChartPtr chart, const Rational& c);
  static SuperFunction scalar(ChartPtr chart, const ScalarExpr& c);
  static SuperFunction odd_coordinate(ChartPtr chart, std::size_t odd_index);
  /// Coordinate as a function: even symbol or odd generator.
  static SuperFunction coordinate(ChartPtr chart, std::size_t coord);
  static SuperFunction monomial(ChartPtr chart, OddMask mask,
                                const ScalarExpr& c);

  const ChartPtr& chart() const { return chart_; }
  const std::map<OddMask, ScalarExpr>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  /// Structural parity: nullopt when inhomogeneous; zero counts as both
  /// and reports Even.
  std::optional<Parity> parity() const;
  bool is_homogeneous(Parity p) const;
  SuperFunction even_part() const;
  SuperFunction odd_part() const;

  /// Coefficient of the empty monomial.
  ScalarExpr body() const;
  /// f minus its body; nilpotent.
  SuperFunction soul() const;

  SuperFunction operator+(const SuperFunction& o) const;
  SuperFunction operator-(const SuperFunction& o) const;
  SuperFunction operator-() const;
  /// Supercommutative product with Koszul signs.
  SuperFunction operator*(const SuperFunction& o) const;
  SuperFunction scale(const ScalarExpr& c) const;

  /// Left partial derivative with respect to coordinate index.
  SuperFunction partial(std::size_t coord) const;

  /// Inverse of an even element with non-vanishing body, by the finite
  /// geometric series in the nilpotent part.
  SuperFunction invert() const;

  /// Square root of an even element with non-vanishing body; the body
  /// root is a sqrt expression node, the nilpotent correction a finite
  /// binomial series. square of the result reproduces the input.
  SuperFunction sqrt_even() const;

  /// View the same data on a compatible chart (same leading even symbols
  /// and odd layout); used for extended-chart embeddings.
  SuperFunction on_chart(ChartPtr chart) const;

  std::string to_string() const;

  bool operator==(const SuperFunction& o) const;
  bool operator!=(const SuperFunction& o) const { return !(*this == o); }

 private:
  ChartPtr chart_;
  std::map<OddMask, ScalarExpr> terms_;
  void add_term(OddMask m, const ScalarExpr& c);
  friend SuperFunction apply_function(GenKind kind, const SuperFunction& f);
};

/// sin/cos/exp/log/sqrt of an even superfunction: Taylor series around the
/// body, truncated by nilpotency of the soul.
SuperFunction apply_function(GenKind kind, const SuperFunction& f);

void require_same_chart(const SuperFunction& a, const SuperFunction& b);

}  // namespace superkilling
