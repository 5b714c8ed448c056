#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "core/errors.hpp"
#include "core/numeric.hpp"
#include "core/superfun.hpp"

namespace superkilling {

// Element shims so the same matrix algorithms run over symbolic and
// numeric entries.
inline SuperFunction elem_zero(const SuperFunction& proto) {
  return SuperFunction::zero(proto.chart());
}
inline SuperFunction elem_one(const SuperFunction& proto) {
  return SuperFunction::one(proto.chart());
}
inline bool elem_is_zero(const SuperFunction& x) { return x.is_zero(); }
inline SuperFunction elem_invert(const SuperFunction& x) { return x.invert(); }

inline NumericSuperValue elem_zero(const NumericSuperValue& proto) {
  return NumericSuperValue(proto.gens());
}
inline NumericSuperValue elem_one(const NumericSuperValue& proto) {
  return NumericSuperValue::constant(proto.gens(), 1.0);
}
inline bool elem_is_zero(const NumericSuperValue& x) {
  return x.max_abs() == 0.0;
}
inline NumericSuperValue elem_invert(const NumericSuperValue& x) {
  return x.invert();
}

/// Parity-blocked square or rectangular matrix with entries in a
/// supercommutative algebra. Row and column parities must be sorted
/// evens-first; entry (r,c) of an even-format matrix has parity
/// p(r)+p(c).
template <typename T>
struct SuperMatrixT {
  std::vector<Parity> row_par, col_par;
  std::vector<T> e;  // row-major
  T proto;           // zero element carrying algebra context

  SuperMatrixT(std::vector<Parity> rp, std::vector<Parity> cp, T prototype)
      : row_par(std::move(rp)),
        col_par(std::move(cp)),
        proto(std::move(prototype)) {
    check_sorted(row_par);
    check_sorted(col_par);
    e.assign(rows() * cols(), elem_zero(proto));
  }

  std::size_t rows() const { return row_par.size(); }
  std::size_t cols() const { return col_par.size(); }
  std::size_t even_rows() const { return count_even(row_par); }
  std::size_t even_cols() const { return count_even(col_par); }

  T& at(std::size_t r, std::size_t c) { return e[r * cols() + c]; }
  const T& at(std::size_t r, std::size_t c) const { return e[r * cols() + c]; }

  static SuperMatrixT identity(std::vector<Parity> par, const T& prototype) {
    SuperMatrixT m(par, par, prototype);
    for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, i) = elem_one(prototype);
    return m;
  }

 private:
  static void check_sorted(const std::vector<Parity>& ps) {
    for (std::size_t i = 1; i < ps.size(); ++i)
      if (ps[i - 1] == Parity::Odd && ps[i] == Parity::Even)
        throw InvalidArgumentError(
            "supermatrix parities must be sorted evens-first");
  }
  static std::size_t count_even(const std::vector<Parity>& ps) {
    std::size_t n = 0;
    while (n < ps.size() && ps[n] == Parity::Even) ++n;
    return n;
  }
};

using SuperMatrix = SuperMatrixT<SuperFunction>;
using NumericSuperMatrix = SuperMatrixT<NumericSuperValue>;

/// Check that every entry is parity-homogeneous of parity p(r)+p(c).
inline void validate_even_format(const SuperMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m.at(r, c).is_homogeneous(m.row_par[r] + m.col_par[c]))
        throw ParityError("supermatrix entry (" + std::to_string(r) + "," +
                          std::to_string(c) + ") violates even format");
}

template <typename T>
SuperMatrixT<T> operator*(const SuperMatrixT<T>& a, const SuperMatrixT<T>& b) {
  if (a.cols() != b.rows())
    throw InvalidArgumentError("supermatrix product shape mismatch");
  SuperMatrixT<T> r(a.row_par, b.col_par, a.proto);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T acc = elem_zero(a.proto);
      for (std::size_t k = 0; k < a.cols(); ++k)
        acc = acc + a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

template <typename T>
SuperMatrixT<T> operator+(const SuperMatrixT<T>& a, const SuperMatrixT<T>& b) {
  SuperMatrixT<T> r = a;
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = r.e[i] + b.e[i];
  return r;
}

template <typename T>
SuperMatrixT<T> operator-(const SuperMatrixT<T>& a, const SuperMatrixT<T>& b) {
  SuperMatrixT<T> r = a;
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = r.e[i] - b.e[i];
  return r;
}

template <typename T>
SuperMatrixT<T> negate(const SuperMatrixT<T>& a) {
  SuperMatrixT<T> r = a;
  for (auto& x : r.e) x = -x;
  return r;
}

/// Block map [[P,Q],[R,S]] -> [[P^T, R^T], [-Q^T, S^T]].
template <typename T>
SuperMatrixT<T> supertranspose(const SuperMatrixT<T>& a) {
  SuperMatrixT<T> r(a.col_par, a.row_par, a.proto);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      bool flip = a.row_par[i] == Parity::Even && a.col_par[j] == Parity::Odd;
      r.at(j, i) = flip ? -a.at(i, j) : a.at(i, j);
    }
  return r;
}

/// Str(M) = sum_a (-1)^{p(a)} M_aa.
template <typename T>
T supertrace(const SuperMatrixT<T>& a) {
  if (a.rows() != a.cols())
    throw InvalidArgumentError("supertrace of a non-square matrix");
  T acc = elem_zero(a.proto);
  for (std::size_t i = 0; i < a.rows(); ++i)
    acc = a.row_par[i] == Parity::Odd ? acc - a.at(i, i) : acc + a.at(i, i);
  return acc;
}

namespace detail {

/// Determinant of a square matrix whose entries commute (even entries);
/// division-free expansion by minors, memoized over column subsets.
template <typename T>
T det_comm_rec(const std::vector<T>& m, std::size_t n, std::size_t row,
               std::uint64_t colmask, const T& proto,
               std::unordered_map<std::uint64_t, T>& memo) {
  if (row == n) return elem_one(proto);
  auto it = memo.find(colmask);
  if (it != memo.end()) return it->second;
  T acc = elem_zero(proto);
  int sign = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (!(colmask & (std::uint64_t{1} << c))) continue;
    const T& entry = m[row * n + c];
    if (!elem_is_zero(entry)) {
      T sub = det_comm_rec(m, n, row + 1, colmask & ~(std::uint64_t{1} << c),
                           proto, memo);
      T term = entry * sub;
      acc = sign ? acc - term : acc + term;
    }
    sign ^= 1;
  }
  memo.emplace(colmask, acc);
  return acc;
}

}  // namespace detail

template <typename T>
T det_comm(const std::vector<T>& entries, std::size_t n, const T& proto) {
  if (n == 0) return elem_one(proto);
  std::unordered_map<std::uint64_t, T> memo;
  return detail::det_comm_rec(entries, n, std::size_t{0},
                              (std::uint64_t{1} << n) - 1, proto, memo);
}

/// Inverse of a commuting-entry square block via the adjugate.
template <typename T>
std::vector<T> inverse_comm(const std::vector<T>& m, std::size_t n,
                            const T& proto) {
  T det = det_comm(m, n, proto);
  T dinv = elem_invert(det);  // throws when the body is singular
  std::vector<T> inv(n * n, elem_zero(proto));
  if (n == 0) return inv;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<T> minor;
      minor.reserve((n - 1) * (n - 1));
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (c == j) continue;
          minor.push_back(m[r * n + c]);
        }
      }
      T cof = det_comm(minor, n - 1, proto);
      if ((i + j) & 1) cof = -cof;
      inv[j * n + i] = cof * dinv;  // adjugate transposes
    }
  return inv;
}

namespace detail {

template <typename T>
struct Blocks {
  std::size_t n, m;
  std::vector<T> P, Q, R, S;
};

template <typename T>
Blocks<T> split(const SuperMatrixT<T>& a) {
  if (a.rows() != a.cols())
    throw InvalidArgumentError("blocked operation requires a square matrix");
  Blocks<T> b;
  b.n = a.even_rows();
  b.m = a.rows() - b.n;
  for (std::size_t i = 0; i < b.n; ++i)
    for (std::size_t j = 0; j < b.n; ++j) b.P.push_back(a.at(i, j));
  for (std::size_t i = 0; i < b.n; ++i)
    for (std::size_t j = 0; j < b.m; ++j) b.Q.push_back(a.at(i, b.n + j));
  for (std::size_t i = 0; i < b.m; ++i)
    for (std::size_t j = 0; j < b.n; ++j) b.R.push_back(a.at(b.n + i, j));
  for (std::size_t i = 0; i < b.m; ++i)
    for (std::size_t j = 0; j < b.m; ++j) b.S.push_back(a.at(b.n + i, b.n + j));
  return b;
}

// Plain row-major product of rectangular blocks.
template <typename T>
std::vector<T> bmul(const std::vector<T>& a, std::size_t ar, std::size_t ac,
                    const std::vector<T>& b, std::size_t bc, const T& proto) {
  std::vector<T> r(ar * bc, elem_zero(proto));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < bc; ++j) {
      T acc = elem_zero(proto);
      for (std::size_t k = 0; k < ac; ++k)
        acc = acc + a[i * ac + k] * b[k * bc + j];
      r[i * bc + j] = acc;
    }
  return r;
}

}  // namespace detail

/// Berezinian of an even-format supermatrix whose odd-odd block has an
/// invertible body: det(P - Q S^-1 R) / det(S).
template <typename T>
T berezinian(const SuperMatrixT<T>& a) {
  auto b = detail::split(a);
  if (b.m == 0) return det_comm(b.P, b.n, a.proto);
  std::vector<T> sinv;
  try {
    sinv = inverse_comm(b.S, b.m, a.proto);
  } catch (const DivisionByZeroError&) {
    throw SingularMatrixError("berezinian: odd-odd block body is singular");
  }
  T dets = det_comm(b.S, b.m, a.proto);
  if (b.n == 0) return elem_invert(dets);
  auto qsr = detail::bmul(detail::bmul(b.Q, b.n, b.m, sinv, b.m, a.proto), b.n,
                          b.m, b.R, b.n, a.proto);
  std::vector<T> schur = b.P;
  for (std::size_t i = 0; i < schur.size(); ++i) schur[i] = schur[i] - qsr[i];
  return det_comm(schur, b.n, a.proto) * elem_invert(dets);
}

/// Block inverse of an even-format supermatrix with invertible body.
template <typename T>
SuperMatrixT<T> inverse(const SuperMatrixT<T>& a) {
  auto b = detail::split(a);
  SuperMatrixT<T> r(a.col_par, a.row_par, a.proto);
  if (b.m == 0) {
    auto pinv = inverse_comm(b.P, b.n, a.proto);
    for (std::size_t i = 0; i < b.n; ++i)
      for (std::size_t j = 0; j < b.n; ++j) r.at(i, j) = pinv[i * b.n + j];
    return r;
  }
  if (b.n == 0) {
    auto sinv = inverse_comm(b.S, b.m, a.proto);
    for (std::size_t i = 0; i < b.m; ++i)
      for (std::size_t j = 0; j < b.m; ++j) r.at(i, j) = sinv[i * b.m + j];
    return r;
  }
  auto sinv = inverse_comm(b.S, b.m, a.proto);
  auto qsr = detail::bmul(detail::bmul(b.Q, b.n, b.m, sinv, b.m, a.proto), b.n,
                          b.m, b.R, b.n, a.proto);
  std::vector<T> schur = b.P;
  for (std::size_t i = 0; i < schur.size(); ++i) schur[i] = schur[i] - qsr[i];
  auto schur_inv = inverse_comm(schur, b.n, a.proto);
  // TL = X, TR = -X Q S^-1, BL = -S^-1 R X, BR = S^-1 + S^-1 R X Q S^-1
  auto qs = detail::bmul(b.Q, b.n, b.m, sinv, b.m, a.proto);        // n x m
  auto rx = detail::bmul(b.R, b.m, b.n, schur_inv, b.n, a.proto);   // m x n
  auto srx = detail::bmul(sinv, b.m, b.m, rx, b.n, a.proto);        // m x n
  auto tr = detail::bmul(schur_inv, b.n, b.n, qs, b.m, a.proto);    // n x m
  auto br_extra = detail::bmul(srx, b.m, b.n, qs, b.m, a.proto);    // m x m
  for (std::size_t i = 0; i < b.n; ++i)
    for (std::size_t j = 0; j < b.n; ++j)
      r.at(i, j) = schur_inv[i * b.n + j];
  for (std::size_t i = 0; i < b.n; ++i)
    for (std::size_t j = 0; j < b.m; ++j)
      r.at(i, b.n + j) = -tr[i * b.m + j];
  for (std::size_t i = 0; i < b.m; ++i)
    for (std::size_t j = 0; j < b.n; ++j)
      r.at(b.n + i, j) = -srx[i * b.n + j];
  for (std::size_t i = 0; i < b.m; ++i)
    for (std::size_t j = 0; j < b.m; ++j)
      r.at(b.n + i, b.n + j) = sinv[i * b.m + j] + br_extra[i * b.m + j];
  return r;
}

}  // namespace superkilling
